//! Acceptance suite: one PASS/FAIL line per criterion. Every comparison is
//! exact integer equality. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use banana_core::curveconfig::{
    branch_euler_closed, branch_euler_master, chain_is_admissible, closed_euler, config_euler,
    is_admissible, master_euler, Branch, BranchKind, Edge,
};
use banana_core::invariants::{
    build_table, check_jacobi_identity, check_norm_invariance, discriminant, jacobi_phi, norm,
    Route,
};
use banana_core::oracle::{all_configs, verify_three_way, DEFAULT_ORACLE_CAP};
use banana_core::partitions::{enumerate_opd, gf_opd_branch, opd_to_branch, Partition};
use banana_core::series::{banana_factors, product_expand, ClassVector, Sign};
use num_bigint::BigInt;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn cv(a: u32, b: u32) -> ClassVector {
    ClassVector::new(a, b)
}

/// Dense one-off expansion of `12 prod (1 - x^m y^(m-1))^2 (1 - x^(m-1) y^m)^2 (1 - x^m y^m)^-4`
/// in i64, sharing no code with the library.
fn hand_expansion(top: usize) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; top + 1]; top + 1];
    g[0][0] = 1;
    let times_binomial = |g: &mut Vec<Vec<i64>>, a: usize, b: usize, c: i64| {
        // multiply by (1 + c x^a y^b)
        for i in (0..=top).rev() {
            for j in (0..=top).rev() {
                if i >= a && j >= b {
                    g[i][j] += c * g[i - a][j - b];
                }
            }
        }
    };
    let divide = |g: &mut Vec<Vec<i64>>, a: usize| {
        // divide by (1 - x^a y^a)
        for i in 0..=top {
            for j in 0..=top {
                if i >= a && j >= a {
                    g[i][j] += g[i - a][j - a];
                }
            }
        }
    };
    for m in 1..=top {
        for _ in 0..2 {
            times_binomial(&mut g, m, m - 1, -1);
            times_binomial(&mut g, m - 1, m, -1);
        }
        for _ in 0..4 {
            divide(&mut g, m);
        }
    }
    for row in &mut g {
        for c in row.iter_mut() {
            *c *= 12;
        }
    }
    g
}

fn golden_values() -> Outcome {
    let golden = [
        ((0, 0), 12),
        ((1, 0), -24),
        ((0, 1), -24),
        ((1, 1), 96),
        ((2, 0), 12),
        ((2, 1), -144),
        ((1, 3), 96),
        ((1, 4), -24),
    ];
    let hand = hand_expansion(4);
    let table =
        build_table(cv(4, 4), Route::Product, DEFAULT_ORACLE_CAP).map_err(|e| e.to_string())?;
    for ((a, b), want) in golden {
        let class = cv(a, b);
        let h = hand[a as usize][b as usize];
        let t = table.signed(class).cloned();
        if h != want || t != Some(BigInt::from(want)) {
            return Err(format!("{class}: expected {want}, hand {h}, table {t:?}"));
        }
    }
    Ok(format!("{} classes", golden.len()))
}

fn three_routes() -> Outcome {
    let maxd = cv(3, 3);
    let report = verify_three_way(maxd, DEFAULT_ORACLE_CAP).map_err(|e| e.to_string())?;
    if let Some(row) = report.first_failure() {
        return Err(format!(
            "{}: product {} partitions {} oracle {:?}",
            row.class, row.product, row.partitions, row.oracle
        ));
    }
    let product =
        build_table(maxd, Route::Product, DEFAULT_ORACLE_CAP).map_err(|e| e.to_string())?;
    let partitions =
        build_table(maxd, Route::Partitions, DEFAULT_ORACLE_CAP).map_err(|e| e.to_string())?;
    let mut compared = 0;
    for row in &report.rows {
        if row.class.total() > DEFAULT_ORACLE_CAP {
            continue;
        }
        let Some(oracle) = &row.oracle else {
            return Err(format!("{}: oracle route skipped", row.class));
        };
        let sign = if row.class.total() % 2 == 0 { 1 } else { -1 };
        let from_oracle = oracle * 12 * sign;
        let p = product.signed(row.class).unwrap();
        let q = partitions.signed(row.class).unwrap();
        if &from_oracle != p || p != q {
            return Err(format!(
                "{}: oracle {from_oracle} product {p} partitions {q}",
                row.class
            ));
        }
        compared += 1;
    }
    Ok(format!("{compared} classes on all three routes"))
}

/// Visits every chain of 0..=6 real edges with thickenings in 1..=5, in place.
fn euler_equivalence() -> Outcome {
    const MAX_EDGES: usize = 6;
    const MAX_THICK: u32 = 5;
    let mut chain = [Edge::REDUCED; MAX_EDGES];
    let mut checked: u64 = 0;
    for len in 0..=MAX_EDGES {
        let mut digits = [0u32; MAX_EDGES];
        loop {
            for k in 0..len {
                chain[k] = Edge {
                    inside: digits[k] / MAX_THICK + 1,
                    outside: digits[k] % MAX_THICK + 1,
                };
            }
            let edges = &chain[..len];
            let (a, b) = (master_euler(edges), closed_euler(edges));
            if a != b {
                return Err(format!("{edges:?}: master {a} closed {b}"));
            }
            checked += 1;
            let mut k = 0;
            while k < len {
                digits[k] += 1;
                if digits[k] < MAX_THICK * MAX_THICK {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
            if k == len {
                break;
            }
        }
    }
    let fig = Branch::from_pairs(BranchKind::UpperQ, &[(5, 3), (3, 2), (1, 1)]).unwrap();
    let (a, b) = (branch_euler_master(&fig), branch_euler_closed(&fig));
    if (a, b) != (7, 7) {
        return Err(format!(
            "worked branch (5,3),(3,2),(1,1): master {a} closed {b}, expected 7"
        ));
    }
    Ok(format!(
        "{checked} chains, worked branch (5,3),(3,2),(1,1) chi = 7"
    ))
}

fn chi_floor() -> Outcome {
    let mut configs = 0usize;
    let mut ones = 0usize;
    for total in 0..=5u32 {
        for d1 in 0..=total {
            let class = cv(d1, total - d1);
            for c in all_configs(class) {
                let chi = config_euler(&c);
                if chi < 1 {
                    return Err(format!("{class}: {c} has chi {chi}"));
                }
                if (chi == 1) != is_admissible(&c) {
                    return Err(format!(
                        "{class}: {c} has chi {chi}, admissible {}",
                        is_admissible(&c)
                    ));
                }
                configs += 1;
                ones += usize::from(chi == 1);
            }
        }
    }
    Ok(format!("{configs} configurations, {ones} with chi = 1"))
}

fn jacobi() -> Outcome {
    let qtrunc = 5;
    let j = jacobi_phi(qtrunc);
    let row0: Vec<(i32, BigInt)> = [(-1, 1), (0, -2), (1, 1)]
        .into_iter()
        .map(|(r, c)| (r, BigInt::from(c)))
        .collect();
    if j.series.row(0) != row0 {
        return Err(format!("q^0 row {:?}", j.series.row(0)));
    }
    // d2 up to 2 * qtrunc + 2 covers every p-exponent of the rows through q^qtrunc
    let table = build_table(
        cv(qtrunc, 2 * qtrunc + 2),
        Route::Product,
        DEFAULT_ORACLE_CAP,
    )
    .map_err(|e| e.to_string())?;
    let report = check_jacobi_identity(&table, &j);
    if let Some(m) = report.mismatches.first() {
        return Err(format!(
            "{}: signed {} vs 12 phi {}",
            m.class, m.signed, m.twelve_phi
        ));
    }
    // every nonzero coefficient of the form must have been compared
    for ((n, r), c) in j.series.terms() {
        let d2 = i64::from(n) + i64::from(r) + 1;
        if d2 < 0 && *c != BigInt::from(0) {
            return Err(format!("q^{n} p^{r} = {c} has no class"));
        }
    }
    let sym = j.symmetry_violations();
    if let Some(((n, r), (n2, r2))) = sym.first() {
        return Err(format!("c({n},{r}) != c({n2},{r2})"));
    }
    Ok(format!(
        "{} coefficients through q^{qtrunc}",
        report.compared
    ))
}

fn norm_invariance() -> Outcome {
    let table =
        build_table(cv(6, 6), Route::Product, DEFAULT_ORACLE_CAP).map_err(|e| e.to_string())?;
    let report = check_norm_invariance(&table);
    if let Some(v) = report.violations.first() {
        return Err(format!("{v:?}"));
    }
    for (class, _) in table.entries() {
        if discriminant(class) != norm(class) {
            return Err(format!("{class}: discriminant identity"));
        }
    }
    Ok(format!(
        "{} classes in {} norm groups",
        table.len(),
        report.groups.len()
    ))
}

fn partition_layer() -> Outcome {
    let want = vec![
        Partition::new(vec![3]).unwrap(),
        Partition::new(vec![2, 1]).unwrap(),
    ];
    let got = enumerate_opd(2, 1);
    if got != want {
        return Err(format!("enumerate_opd(2,1) = {got:?}"));
    }
    let trunc = cv(8, 8);
    let mut coeffs = 0;
    let mut witnesses = 0;
    for kind in BranchKind::ALL {
        let g = gf_opd_branch(kind, trunc);
        let mut counts = std::collections::BTreeMap::<ClassVector, u64>::new();
        for dark in 0..=8u32 {
            for light in 0..=(8 - dark) {
                for p in enumerate_opd(dark, light) {
                    let b = opd_to_branch(&p, kind).map_err(|e| e.to_string())?;
                    if !chain_is_admissible(b.edges()) || branch_euler_master(&b) != 1 {
                        return Err(format!("{p} -> {b} not an admissible chi = 1 branch"));
                    }
                    *counts.entry(b.class()).or_default() += 1;
                    witnesses += 1;
                }
            }
        }
        for c in trunc.rectangle().filter(|c| c.total() <= 8) {
            let n = counts.get(&c).copied().unwrap_or(0);
            if g.coeff(c).unwrap() != BigInt::from(n) {
                return Err(format!(
                    "{kind:?} {c}: gf {} enumeration {n}",
                    g.coeff(c).unwrap()
                ));
            }
            coeffs += 1;
        }
    }
    Ok(format!("{coeffs} coefficients, {witnesses} witnesses"))
}

fn sign_rule() -> Outcome {
    let trunc = cv(10, 10);
    let plus = product_expand(banana_factors(Sign::Plus), trunc).map_err(|e| e.to_string())?;
    let minus = product_expand(banana_factors(Sign::Minus), trunc).map_err(|e| e.to_string())?;
    let flipped = plus.substitute_neg();
    for c in trunc.rectangle() {
        if flipped.coeff(c).unwrap() != minus.coeff(c).unwrap() {
            return Err(format!(
                "{c}: {} vs {}",
                flipped.coeff(c).unwrap(),
                minus.coeff(c).unwrap()
            ));
        }
    }
    Ok(format!(
        "{} coefficients in window {trunc}",
        (trunc.d1 + 1) * (trunc.d2 + 1)
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check, Duration); 8] = [
        ("1 golden values", golden_values, Duration::from_secs(1)),
        (
            "2 three-route agreement",
            three_routes,
            Duration::from_secs(60),
        ),
        (
            "3 Euler-calculus equivalence",
            euler_equivalence,
            Duration::from_secs(30),
        ),
        ("4 chi floor and admissibility", chi_floor, Duration::MAX),
        ("5 Jacobi identity", jacobi, Duration::MAX),
        ("6 norm invariance", norm_invariance, Duration::MAX),
        ("7 partition layer", partition_layer, Duration::MAX),
        ("8 sign-rule identity", sign_rule, Duration::MAX),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > budget => Err(format!("{msg}; took {took:.2?}, budget {budget:.0?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS  {name}: {msg} (tolerance 0, {took:.2?})"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name}: {msg} (tolerance 0, {took:.2?})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
