//! End-to-end acceptance gate. Every criterion is exact; each one prints a
//! single PASS/FAIL line with its runtime and is held to a wall-clock budget.

use std::io::Write;
use std::time::{Duration, Instant};

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;
use spinbranch::cliffspin::{gamma_map, half_dim, spin_dim, zeta_vector, SpinMap, Variant};
use spinbranch::kernelcalc::{
    check_identity, check_projection_support, expected_degree, make_family, FamilyId, FamilyParams, IdentityId, ParamKind, ALL_FAMILIES,
};
use spinbranch::monogenics::{
    clifford_x, dirac, fischer_split, gegenbauer_identity_report, lambda_sweep, monomials_of_degree, verify_branching, SpinorPolynomial,
    GEGENBAUER_IDENTITIES,
};
use spinbranch::paramfield::GaussianRational as G;
use spinbranch::sbolattice::{composition_multiplicity, lattice_grid, lattice_point, total_dimension};

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Verdict {
    let rep = gegenbauer_identity_report(10);
    if let Some(bad) = rep.checks.iter().find(|c| !c.pass) {
        return Err(format!("{} fails at degree {}: {:?}", bad.identity, bad.degree, bad.residual));
    }
    for name in GEGENBAUER_IDENTITIES {
        ensure(rep.checks.iter().any(|c| c.identity == name), || format!("{name} was not checked"))?;
    }
    Ok(format!("{} identity instances up to degree 10", rep.checks.len()))
}

fn criterion_2() -> Verdict {
    let mut images = 0;
    let mut equiv = 0;
    for n in 2..=4 {
        let rep = verify_branching(n, 4).map_err(|e| format!("n={n}: {e}"))?;
        if let Some(f) = rep.failure {
            return Err(format!("n={n}: {f}"));
        }
        images += rep.images;
        equiv += rep.equivariance;
    }
    Ok(format!("{images} monogenic images, {equiv} equivariance checks"))
}

fn criterion_3() -> Verdict {
    let mut count = 0;
    for n in 3..=6 {
        let rows = lambda_sweep(n, 3).map_err(|e| format!("n={n}: {e}"))?;
        ensure(!rows.is_empty(), || format!("n={n}: no pairs"))?;
        if let Some(r) = rows.iter().find(|r| !r.agrees()) {
            return Err(format!(
                "n={n} {}->{} / {}->{}: closed form {} vs brute force {:?} ({:?})",
                r.alpha, r.beta, r.alpha_p, r.beta_p, r.closed_form, r.bruteforce, r.error
            ));
        }
        count += rows.len();
    }
    Ok(format!("{count} adjacent pairs agree"))
}

fn run_identities(ids: &[IdentityId], ns: impl Iterator<Item = usize> + Clone, max_index: u32) -> Result<Vec<String>, String> {
    let mut names = Vec::new();
    for &id in ids {
        for n in ns.clone() {
            for index in 0..=max_index {
                let rep = check_identity(id, n, index).map_err(|e| format!("({}) n={n} index={index}: {e}", id.letter()))?;
                if let Some(c) = rep.checks.iter().find(|c| !c.passed) {
                    return Err(format!("({}) n={n} index={index}: {} {:?}", id.letter(), c.name, c.detail));
                }
                names.extend(rep.checks.into_iter().map(|c| c.name));
            }
        }
    }
    Ok(names)
}

fn criterion_4() -> Verdict {
    let names = run_identities(&IdentityId::ALL, 2..=6, 5)?;
    for needle in ["x_n C+[1] = -2(lambda+nu+1/2) C-[0]", "x_n C-[", "compact = expanded"] {
        ensure(names.iter().any(|s| s.contains(needle)), || format!("no sub-check matching {needle:?}"))?;
    }
    Ok(format!("{} sub-checks", names.len()))
}

fn criterion_5() -> Verdict {
    let names = run_identities(&[IdentityId::E], 2..=6, 4)?;
    let mut supp = 0;
    for n in [2, 4, 6] {
        for index in 0..=4 {
            for c in check_projection_support(n, index).map_err(|e| format!("n={n}: {e}"))? {
                ensure(c.passed, || format!("n={n} index={index}: {} {:?}", c.name, c.detail))?;
                supp += 1;
            }
        }
    }
    Ok(format!("{} translation sub-checks, {supp} support comparisons", names.len()))
}

fn criterion_6() -> Verdict {
    let depth = 12;
    let mut points = 0;
    let mut on = 0;
    for n in [4, 5] {
        let rows = lattice_grid(n, 4, 4, depth).map_err(|e| e.to_string())?;
        for pair in rows.chunks(2) {
            let (p, m) = (&pair[0], &pair[1]);
            ensure(p.lam0 == m.lam0 && p.nu0 == m.nu0 && p.sector == '+' && m.sector == '-', || "grid rows out of order".into())?;
            let want = if p.on_lattice { 3 } else { 2 };
            ensure(p.dim + m.dim == want, || format!("n={n} ({}, {}): {}+{} instead of {want}", p.lam0, p.nu0, p.dim, m.dim))?;
            ensure(p.stabilized && m.stabilized, || format!("n={n} ({}, {}) not stabilized", p.lam0, p.nu0))?;
            points += 1;
            on += p.on_lattice as usize;
        }
        // the same window shifted by ½ in λ contains no lattice points
        let h = G::from_frac(1, 2);
        let rho = G::from_frac(n as i64, 2);
        let rho_h = G::from_frac(n as i64 - 1, 2);
        for a in -1..=5i64 {
            for b in -1..=5i64 {
                let lam0 = -&(&rho + &G::from_int(a));
                let nu0 = -&(&(&rho_h + &h) + &G::from_int(b));
                ensure(lattice_point(n, &lam0, &nu0).is_none(), || "shifted point on the lattice".into())?;
                let t = total_dimension(n, lam0.clone(), nu0.clone(), depth).map_err(|e| e.to_string())?;
                ensure(t.total == 2 && t.stabilized, || format!("n={n} ({lam0}, {nu0}): total {} stabilized {}", t.total, t.stabilized))?;
                points += 1;
            }
        }
    }
    Ok(format!("{points} points, {on} on the lattice"))
}

fn criterion_7() -> Verdict {
    let mut blocks = 0;
    for n in [4, 5] {
        for i in 0..=4 {
            for j in 0..=4 {
                for parity in 0..2u8 {
                    let b = composition_multiplicity(n, i, j, parity, 12).map_err(|e| e.to_string())?;
                    let regime = j <= i && (i + j) % 2 == parity as usize;
                    let want = if regime { (1, 0, 0, 1) } else { (0, 0, 1, 0) };
                    let got = (b.ff, b.ft, b.tf, b.tt);
                    ensure(got == want, || format!("n={n} i={i} j={j} parity={parity}: (FF,FT,TF,TT) = {got:?}, expected {want:?}"))?;
                    ensure(b.stabilized, || format!("n={n} i={i} j={j} parity={parity} not stabilized"))?;
                    blocks += 1;
                }
            }
        }
    }
    Ok(format!("{blocks} blocks of four"))
}

fn sample<S: Strategy>(runner: &mut TestRunner, s: &S) -> S::Value {
    s.new_tree(runner).expect("strategy").current()
}

fn criterion_8() -> Verdict {
    let mut runner = TestRunner::deterministic();
    let rat = (-12i64..=12, 1i64..=6).prop_map(|(a, b)| G::from_frac(a, b));
    let mut count = 0;
    for n in 1..=7 {
        for _ in 0..20 {
            let v: Vec<G> = (0..n).map(|_| sample(&mut runner, &rat)).collect();
            let norm = v.iter().fold(G::zero(), |acc, x| &acc + &(x * x));
            let variants: &[Variant] = if n % 2 == 1 { &[Variant::Plus, Variant::Minus] } else { &[Variant::Plus] };
            for &var in variants {
                let z = zeta_vector(n, var, &v).map_err(|e| e.to_string())?;
                ensure(z.compose(&z) == SpinMap::identity(spin_dim(n)).scale(&-&norm), || format!("zeta(v)^2 fails for n={n}"))?;
                if n % 2 == 0 {
                    let g = gamma_map(half_dim(n)).to_map();
                    ensure(g.compose(&z).add(&z.compose(&g)).is_zero(), || format!("gamma does not anticommute, n={n}"))?;
                }
                count += 1;
            }
        }
    }
    for n in 2..=6 {
        for id in ALL_FAMILIES {
            for k in 0..=4u32 {
                let params = match id.param_kind() {
                    ParamKind::Generic => FamilyParams::Generic,
                    ParamKind::Index => FamilyParams::Index(k),
                    ParamKind::Point if matches!(id, FamilyId::AAMinus | FamilyId::SlashAAMinus) => {
                        FamilyParams::Point { i: k + 1, j: k % 2 }
                    }
                    ParamKind::Point => FamilyParams::Point { i: k, j: k % 2 },
                };
                let kernel = make_family(id, n, params).map_err(|e| format!("{id} n={n}: {e}"))?;
                let want = expected_degree(id, n, params).map_err(|e| e.to_string())?;
                let degs = kernel.degrees();
                ensure(degs.is_empty() || degs == vec![want.clone()], || format!("{id} n={n} k={k}: degrees {degs:?}, expected {want:?}"))?;
                count += 1;
                if params == FamilyParams::Generic {
                    break;
                }
            }
        }
    }
    for n in 2..=4 {
        for d in 0..=5 {
            let monos = monomials_of_degree(n, d);
            let s = spin_dim(n);
            for _ in 0..3 {
                let v: Vec<G> = (0..monos.len() * s).map(|_| sample(&mut runner, &rat)).collect();
                let phi = SpinorPolynomial::from_dense(n, s, &monos, &v);
                let parts = fischer_split(&phi).map_err(|e| format!("n={n} d={d}: {e}"))?;
                let mut sum = SpinorPolynomial::zero(n, s);
                for (j, psi) in &parts {
                    ensure(dirac(psi).is_zero(), || format!("n={n} d={d}: component {j} not monogenic"))?;
                    let mut t = psi.clone();
                    for _ in 0..*j {
                        t = clifford_x(&t);
                    }
                    sum = sum.add(&t);
                }
                ensure(sum == phi, || format!("n={n} d={d}: Fischer components do not recombine"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} structural checks"))
}

// Written to the raw handle so the lines survive the harness's output capture.
fn report(line: String) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").and_then(|_| out.flush()).expect("stdout");
}

#[test]
fn acceptance() {
    let criteria: [(u8, &str, u64, fn() -> Verdict); 8] = [
        (1, "Gegenbauer identities", 1, criterion_1),
        (2, "monogenic branching and equivariance", 30, criterion_2),
        (3, "lambda constants, closed form vs brute force", 120, criterion_3),
        (4, "kernel identity catalogue", 60, criterion_4),
        (5, "spinor translation identities and projected supports", 60, criterion_5),
        (6, "multiplicities on the K-type lattice", 300, criterion_6),
        (7, "composition factor tables", 300, criterion_7),
        (8, "structural invariants", 30, criterion_8),
    ];
    let mut failed = Vec::new();
    for (id, name, budget, run) in criteria {
        let t = Instant::now();
        let verdict = run();
        let elapsed = t.elapsed();
        let verdict = match verdict {
            Ok(d) if elapsed > Duration::from_secs(budget) => Err(format!("{d}, but over the {budget} s budget")),
            v => v,
        };
        match &verdict {
            Ok(d) => report(format!("criterion {id} PASS [{name}] {:.2} s: {d}", elapsed.as_secs_f64())),
            Err(e) => {
                report(format!("criterion {id} FAIL [{name}] {:.2} s: {e}", elapsed.as_secs_f64()));
                failed.push(id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
