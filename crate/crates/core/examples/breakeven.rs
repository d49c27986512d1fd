//! Evaluations needed before a learned surrogate repays its data and
//! training cost, for a few per-call speedups.

use pbb::bench::{breakeven_n, BreakEvenInputs};

fn main() -> pbb::Result<()> {
    let (c_data, c_train, t_b) = (3600.0, 7200.0, 0.5);
    println!("C_data {c_data} s, C_train {c_train} s, t_B {t_b} s");
    for s in [1.5, 2.0, 10.0, 100.0, 1000.0] {
        let inputs = BreakEvenInputs { c_data, c_train, t_b, s };
        let n = breakeven_n(&inputs)?;
        println!("s {s:>7}  N {n:>10.0}  residual {:.1e}", inputs.balance_residual(n));
    }
    match breakeven_n(&BreakEvenInputs { c_data, c_train, t_b, s: 0.8 }) {
        Ok(n) => println!("unexpected N {n}"),
        Err(e) => println!("s 0.8: {e}"),
    }
    Ok(())
}
