//! Audits two speedup claims against measured fronts: one inflated, one
//! consistent, plus a claim made against a forbidden baseline.

use pbb::bench::{audit_comparison, Claim, FrontPoint};

fn pts(v: &[(f64, f64)]) -> Vec<FrontPoint> {
    v.iter().map(|&(c, e)| FrontPoint::new(c, e)).collect()
}

fn report(label: &str, claim: &Claim) -> pbb::Result<()> {
    println!("{label}");
    for v in audit_comparison(claim)? {
        println!("  {:?} {} {:?}: {}", v.rule, v.grade.symbol(), v.reason_code, v.rationale);
    }
    Ok(())
}

fn main() -> pbb::Result<()> {
    let baseline = pts(&[(0.02, 0.2), (0.2, 0.02), (2.0, 0.002)]);
    let surrogate = pts(&[(0.025, 0.2), (0.25, 0.02)]);
    let mut claim = Claim {
        pde_id: "navier_stokes_2d".into(),
        declared_baseline_id: "ps".into(),
        claimed_speedup: 80.0,
        target_error: Some(0.02),
        baseline_dof: Some(64 * 64),
        front_a: baseline,
        front_b: surrogate,
    };
    report("80x claim", &claim)?;

    claim.claimed_speedup = 0.8;
    report("0.8x claim", &claim)?;

    claim.pde_id = "burgers".into();
    claim.declared_baseline_id = "fv_godunov".into();
    report("claim against first-order Godunov on Burgers", &claim)?;
    Ok(())
}
