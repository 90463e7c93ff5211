use crate::error::{Error, Result};
use crate::grid::ScalarField;
use crate::lipschitz::{
    derivative_lipschitz_heterogeneous, derivative_lipschitz_homogeneous, ConstantKind, LipschitzEstimate,
};
use crate::pde::{BoundarySpec, DiffusionModel, SolveConfig, Stepper};

/// The physics and stepping parameters a field was solved under.
#[derive(Debug, Clone)]
pub struct Problem {
    pub diffusion: DiffusionModel,
    pub boundary: BoundarySpec,
    pub config: SolveConfig,
}

impl Problem {
    pub fn r(&self) -> f64 {
        self.config.r
    }

    pub fn describe_diffusion(&self) -> String {
        match &self.diffusion {
            DiffusionModel::Constant(d) => format!("constant {d}"),
            DiffusionModel::Heterogeneous(f) => {
                format!("heterogeneous d_min={} d_max={}", f.min(), f.max())
            }
        }
    }

    /// Rejects a field that one more explicit step would move by more than
    /// `steady_tol`.
    pub fn check_steady(&self, field: &ScalarField) -> Result<f64> {
        let mut stepper = Stepper::new(field.grid(), &self.diffusion, &self.boundary, &self.config)?;
        let mut next = field.clone();
        let increment = stepper.advance(&mut next)?;
        if increment > self.config.steady_tol {
            return Err(Error::invalid(format!(
                "field is not steady: one more step moves it by {increment:e} > steady_tol {:e}",
                self.config.steady_tol
            )));
        }
        Ok(increment)
    }

    /// Analytic Lipschitz constant of the derivative, chosen by diffusion
    /// model, plus the notes the choice calls for.
    pub fn derivative_lipschitz(&self) -> Result<(LipschitzEstimate, Vec<String>)> {
        let r = self.r();
        let mut notes = Vec::new();
        if r == 0.0 {
            notes.push("r = 0: the reaction term vanishes and the derivative Lipschitz constant is 0".to_string());
            return Ok((
                LipschitzEstimate::analytic(0.0, ConstantKind::DerivativeLipschitz),
                notes,
            ));
        }
        let rho = match &self.diffusion {
            DiffusionModel::Constant(d) => {
                if *d != 1.0 {
                    notes.push(format!(
                        "homogeneous constant r/4 = {} does not involve D = {d}; the dimensionally consistent r/(4D) is {}",
                        r / 4.0,
                        r / (4.0 * d)
                    ));
                }
                derivative_lipschitz_homogeneous(r)?
            }
            DiffusionModel::Heterogeneous(f) => {
                notes.push(format!(
                    "heterogeneous diffusion uses r/(4 d_min) with d_min = {}; the homogeneous form r/4 omits D and agrees only when D = 1",
                    f.min()
                ));
                derivative_lipschitz_heterogeneous(r, self.diffusion.d_min())?
            }
        };
        Ok((
            LipschitzEstimate::analytic(rho, ConstantKind::DerivativeLipschitz),
            notes,
        ))
    }
}
