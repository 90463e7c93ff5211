use std::time::Instant;

use crate::error::{Error, Result};
use crate::grid::{ScalarField, MAX_DIM};
use crate::lipschitz::{
    boundary_derivative_anchor, derivative_bound, empirical_derivative_lipschitz, empirical_derivative_sup,
    empirical_lipschitz, empirical_lipschitz_in, stitch_lipschitz, ConstantKind, LipschitzEstimate, NodeBox,
};
use crate::net::RectPartition;
use crate::verify::problem::Problem;
use crate::verify::report::{Check, EstimateRecord, ReportInputs, VerificationReport, ROUNDING_TOL};

/// Closed node boxes of each tile. Every cut must fall on a grid line.
pub fn tile_boxes(field: &ScalarField, tiling: &RectPartition) -> Result<Vec<NodeBox>> {
    let grid = field.grid();
    if tiling.dim() != grid.dim() {
        return Err(Error::invalid(format!(
            "tiling is {}D but the field is {}D",
            tiling.dim(),
            grid.dim()
        )));
    }
    let intervals = grid.n() - 1;
    for (axis, &cells) in tiling.cells_per_axis().iter().enumerate() {
        if !intervals.is_multiple_of(cells) {
            return Err(Error::invalid(format!(
                "incompatible tiling: {cells} cells along axis {axis} do not divide {intervals} grid intervals"
            )));
        }
    }
    Ok((0..tiling.len())
        .map(|t| {
            let idx = tiling.cell_index(t);
            let mut b = NodeBox {
                lo: [0; MAX_DIM],
                hi: [0; MAX_DIM],
            };
            for axis in 0..grid.dim() {
                let w = intervals / tiling.cells_per_axis()[axis];
                b.lo[axis] = idx[axis] * w;
                b.hi[axis] = (idx[axis] + 1) * w;
            }
            b
        })
        .collect())
}

/// Compares the maximum of per-tile empirical Lipschitz constants with the
/// whole-domain constant. Tiles are closed, so neighbours share their cut
/// line and every adjacent pair lies in some tile.
pub fn verify_lemma1(field: &ScalarField, tiling: &RectPartition) -> Result<VerificationReport> {
    let started = Instant::now();
    let grid = field.grid();
    let boxes = tile_boxes(field, tiling)?;
    let parts: Vec<LipschitzEstimate> = boxes
        .iter()
        .enumerate()
        .map(|(i, b)| empirical_lipschitz_in(field, b, i))
        .collect();
    let stitched = stitch_lipschitz(&parts)?;
    let whole = empirical_lipschitz(field);
    let h = grid.spacing();
    let checks = vec![
        Check::new("whole_within_stitched", stitched.rho, whole.rho, ROUNDING_TOL),
        Check::new(
            "stitched_equals_whole",
            0.0,
            (stitched.rho - whole.rho).abs(),
            ROUNDING_TOL,
        ),
    ];
    let mut estimates: Vec<EstimateRecord> = parts
        .iter()
        .map(|e| EstimateRecord::new("subdomain", e, None, None, h))
        .collect();
    estimates.push(EstimateRecord::new("stitched", &stitched, None, None, h));
    estimates.push(EstimateRecord::new("whole", &whole, None, None, h));
    let inputs = ReportInputs {
        dim: grid.dim(),
        n: grid.n(),
        h,
        tiling: Some(tiling.cells_per_axis().to_vec()),
        ..Default::default()
    };
    Ok(VerificationReport::assemble(
        "lemma1",
        inputs,
        checks,
        estimates,
        0,
        Vec::new(),
        started,
    ))
}

/// Measured derivative Lipschitz constant and derivative sup against their
/// analytic bounds, with grid allowances `4h` and `2h`.
pub fn verify_lemma2_lemma3(problem: &Problem, field: &ScalarField) -> Result<VerificationReport> {
    let started = Instant::now();
    let grid = field.grid();
    problem.check_steady(field)?;
    let h = grid.spacing();
    let (rho, mut notes) = problem.derivative_lipschitz()?;
    let anchor = boundary_derivative_anchor(&problem.boundary, grid)?;
    let diameter = (grid.dim() as f64).sqrt();
    let c = derivative_bound(anchor, diameter, rho.rho)?;
    let measured_rho = empirical_derivative_lipschitz(field)?;
    let measured_c = empirical_derivative_sup(field);
    if !problem.diffusion.is_homogeneous() {
        notes.push(
            "the heterogeneous bounds use r/(4 d_min) and ignore the grad D . grad u term of div(D grad u)".to_string(),
        );
    }
    let checks = vec![
        Check::new("derivative_lipschitz", rho.rho, measured_rho.rho, 4.0 * h),
        Check::new("derivative_bound", c, measured_c.rho, 2.0 * h),
    ];
    let r = Some(problem.r());
    let d_min = Some(problem.diffusion.d_min());
    let estimates = vec![
        EstimateRecord::new("rho", &rho, r, d_min, h),
        EstimateRecord::new(
            "C",
            &LipschitzEstimate::analytic(c, ConstantKind::DerivativeBound),
            r,
            d_min,
            h,
        ),
        EstimateRecord::new("measured_rho", &measured_rho, r, d_min, h),
        EstimateRecord::new("measured_derivative_sup", &measured_c, r, d_min, h),
    ];
    let inputs = ReportInputs {
        dim: grid.dim(),
        n: grid.n(),
        h,
        r,
        diffusion: Some(problem.describe_diffusion()),
        ..Default::default()
    };
    Ok(VerificationReport::assemble(
        "lemma2_lemma3",
        inputs,
        checks,
        estimates,
        0,
        notes,
        started,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::UniformGrid;

    #[test]
    fn abs_field_with_cut_at_half() {
        let g = UniformGrid::new(1, 9).unwrap();
        let f = ScalarField::from_fn(g, |x| (x[0] - 0.5).abs()).unwrap();
        let rep = verify_lemma1(&f, &RectPartition::uniform(vec![2]).unwrap()).unwrap();
        assert!(rep.status.is_pass());
        assert!((rep.estimates.last().unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn incompatible_tiling_is_rejected() {
        let g = UniformGrid::new(1, 10).unwrap();
        let f = ScalarField::constant(g, 0.0).unwrap();
        assert!(verify_lemma1(&f, &RectPartition::uniform(vec![2]).unwrap()).is_err());
        assert!(verify_lemma1(&f, &RectPartition::uniform(vec![3]).unwrap()).is_ok());
        assert!(verify_lemma1(&f, &RectPartition::uniform(vec![3, 3]).unwrap()).is_err());
    }

    #[test]
    fn tiles_cover_and_share_edges() {
        let g = UniformGrid::new(2, 9).unwrap();
        let f = ScalarField::constant(g, 0.0).unwrap();
        let boxes = tile_boxes(&f, &RectPartition::uniform(vec![4, 2]).unwrap()).unwrap();
        assert_eq!(boxes.len(), 8);
        assert_eq!(boxes[0].hi, [2, 4]);
        assert_eq!(boxes[7].lo, [6, 4]);
        assert_eq!(boxes[7].hi, [8, 8]);
    }
}
