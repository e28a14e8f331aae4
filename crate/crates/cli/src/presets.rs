//! Turns configuration presets into evaluators and a DirichletProblem.
//! Every preset has a known closed form, so downstream experiments always
//! have a provenance for what they measure.

use crate::config::{InstanceSpec, Preset, SymmetryKind};
use cmab_core::geometry::BallDomain;
use cmab_core::solver::{DirichletProblem, Symmetry};
use cmab_core::{real_fn, CoreError, RealFn, Result};

/// Evaluator of a preset over real coordinates of ℂⁿ.
pub fn preset_fn(p: &Preset) -> RealFn {
    match *p {
        Preset::Zero => real_fn(|_: &[f64]| 0.0),
        Preset::Const(c) => real_fn(move |_: &[f64]| c),
        Preset::Linear(c) => real_fn(move |x: &[f64]| c * x[0]),
        Preset::Quad => real_fn(|x: &[f64]| x.iter().map(|v| v * v).sum()),
        Preset::Abspow(a) => real_fn(move |x: &[f64]| x[0].abs().powf(1.0 + a)),
        Preset::Radialpow(b) => {
            real_fn(move |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>().powf(b / 2.0))
        }
        Preset::ToricSlice => real_fn(|x: &[f64]| x[0] * x[0] + x[1] * x[1]),
    }
}

/// Builds the validated problem from an instance spec.
pub fn build_problem(spec: &InstanceSpec) -> Result<DirichletProblem> {
    let domain = BallDomain::new(spec.n, spec.r)?;
    let symmetry = match spec.symmetry {
        SymmetryKind::Disc => Symmetry::Disc,
        SymmetryKind::Radial => Symmetry::Radial,
        SymmetryKind::Toric => Symmetry::Toric,
    };
    // presets that break the claimed symmetry are caught by problem
    // validation; fail early with a clearer message for the common case
    if symmetry == Symmetry::Radial
        && (matches!(spec.phi, Preset::Linear(_) | Preset::Abspow(_) | Preset::ToricSlice)
            || matches!(spec.f_root, Preset::Linear(_) | Preset::Abspow(_) | Preset::ToricSlice))
    {
        return Err(CoreError::InvalidArgument(
            "radial symmetry requires radially invariant presets".into(),
        ));
    }
    DirichletProblem::new(domain, preset_fn(&spec.f_root), preset_fn(&spec.phi), symmetry)
}

/// Explicit solution candidate for degenerate toric instances, when the
/// preset combination has one.
pub fn degenerate_candidate(spec: &InstanceSpec) -> Option<RealFn> {
    if spec.symmetry == SymmetryKind::Toric
        && spec.f_root == Preset::Zero
        && spec.phi == Preset::ToricSlice
    {
        Some(real_fn(|x: &[f64]| x[0] * x[0] + x[1] * x[1]))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quad_preset_evaluates() {
        let f = preset_fn(&Preset::Quad);
        assert_eq!(f(&[3.0, 4.0]), 25.0);
    }

    #[test]
    fn disc_problem_builds() {
        let spec = InstanceSpec {
            n: 1,
            r: 1.0,
            symmetry: SymmetryKind::Disc,
            phi: Preset::Zero,
            f_root: Preset::Const(1.0),
        };
        assert!(build_problem(&spec).is_ok());
    }

    #[test]
    fn nonradial_preset_under_radial_tag_rejected() {
        let spec = InstanceSpec {
            n: 2,
            r: 1.0,
            symmetry: SymmetryKind::Radial,
            phi: Preset::Linear(1.0),
            f_root: Preset::Const(1.0),
        };
        assert!(build_problem(&spec).is_err());
    }

    #[test]
    fn toric_degenerate_has_candidate() {
        let spec = InstanceSpec {
            n: 2,
            r: 1.0,
            symmetry: SymmetryKind::Toric,
            phi: Preset::ToricSlice,
            f_root: Preset::Zero,
        };
        assert!(degenerate_candidate(&spec).is_some());
    }
}
