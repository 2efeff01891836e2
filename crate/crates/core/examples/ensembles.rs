//! Seeded random pairs checked against the oracle.

use gaussian_tv::cli::is_violation;
use gaussian_tv::{assess, generate, oracle, EnsembleKind, EnsembleSpec, Tolerances};

fn main() -> gaussian_tv::Result<()> {
    let tol = Tolerances::default();
    let kinds = [
        (EnsembleKind::SameMeanPD, 4),
        (EnsembleKind::DiffMean, 4),
        (EnsembleKind::NearIdentical, 3),
        (EnsembleKind::SameRangeSingular, 4),
        (EnsembleKind::DisjointSupport, 3),
        (EnsembleKind::OneDim, 1),
    ];
    for (kind, dim) in kinds {
        let spec = EnsembleSpec::new(kind, dim, 20, 7).with_cap(100.0);
        let mut widths = Vec::new();
        let mut violations = 0;
        for (i, pair) in generate(&spec)?.iter().enumerate() {
            let report = assess(&pair.first, &pair.second, &tol)?;
            let e = oracle(&pair.first, &pair.second, 50_000, i as u64, &tol)?;
            violations += is_violation(report.best_lower, report.best_upper, &e) as usize;
            widths.push(report.best_upper / report.best_lower.max(1e-300));
        }
        widths.sort_by(f64::total_cmp);
        println!(
            "{kind:<18?} d={dim}: median upper/lower {:>10.2}, violations {violations}",
            widths[widths.len() / 2]
        );
    }
    Ok(())
}
