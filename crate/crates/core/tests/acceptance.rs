//! The fifteen acceptance criteria, one PASS/FAIL line each.

use std::cmp::Ordering;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use pform::dobbertin::{derive_perm_poly, qn, qn_delta_closed_form, qn_inverse};
use pform::expr::parse;
use pform::group::coset::coset_rep_system;
use pform::group::delta_group::{certify_infinite_order, InfiniteOrder};
use pform::group::words::{shape_word, word_delta_n2q2, word_expand, GeneratorTable};
use pform::group::{embed, RationalMonomial};
use pform::pform::{compose, delta, delta_of_composition, delta_of_iterate, iterate, membership_necessary_checks, verify_inverse};
use pform::{DegElem, DegreeRing, DeltaPair, ExtDeg, RatFunc};
use rand::Rng;

mod common;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    check(t < limit, format!("{what} took {:.2?}, limit {:.0?}", t, limit))
}

fn x0(c: &pform::PFormCtx) -> RatFunc {
    RatFunc::identity(c)
}

fn both_nonzero(d: &DeltaPair) -> bool {
    matches!((&d.dmax, &d.dmin), (ExtDeg::Finite(a), ExtDeg::Finite(b)) if !a.is_zero() && !b.is_zero())
}

fn c1() -> Outcome {
    let t = Instant::now();
    let f = iterate(&qn(2).unwrap(), 2).unwrap();
    check(f.rat_eq(&x0(f.ctx())), format!("Q_2 o Q_2 = {f}"))?;
    within(t, Duration::from_secs(1), "iterate")?;
    Ok("Q_2 o Q_2 = x0".into())
}

fn c2() -> Outcome {
    let t = Instant::now();
    for n in 2..=4 {
        check(verify_inverse(&qn(n).unwrap(), &qn_inverse(n).unwrap()).unwrap(), format!("n = {n}"))?;
    }
    within(t, Duration::from_secs(60), "verification")?;
    Ok("inverse formula verified for n = 2, 3, 4".into())
}

fn c3() -> Outcome {
    let t = Instant::now();
    let q2 = qn(2).unwrap();
    let c = q2.ctx().clone();
    let a = parse(&c, "x0+1").unwrap();
    let f = iterate(&compose(&a, &q2).unwrap(), 3).unwrap();
    check(f.rat_eq(&x0(&c)), format!("((x0+1) o Q_2)^3 = {f}"))?;
    within(t, Duration::from_secs(1), "iterate")?;
    Ok("((x0+1) o Q_2)^(3) = x0".into())
}

fn c4() -> Outcome {
    for n in 2..=8usize {
        let mut dmax = vec![0i64; n];
        dmax[0] = 1;
        dmax[1] = -1;
        let mut dmin = vec![0i64; n];
        dmin[0] = -1;
        if n % 2 == 0 {
            dmin[1] = -1;
        }
        let want = DeltaPair::finite(DegElem::from_i64s(&dmax), DegElem::from_i64s(&dmin));
        let got = delta(&qn(n).unwrap());
        check(got == want, format!("n = {n}: got {got}, want {want}"))?;
    }
    Ok("delta(Q_n) for n = 2..8".into())
}

fn c5() -> Outcome {
    let t = Instant::now();
    for n in [2usize, 3] {
        let f = qn(n).unwrap();
        for m in 0..=3u64 {
            let got = delta(&iterate(&f, m).unwrap());
            let want = qn_delta_closed_form(n, m).unwrap();
            check(got == want, format!("expansion n = {n}, m = {m}: {got} vs {want}"))?;
        }
    }
    for n in 2..=5usize {
        let f = qn(n).unwrap();
        for m in 0..=6u64 {
            let got = delta_of_iterate(&f, m).unwrap();
            let want = qn_delta_closed_form(n, m).unwrap();
            check(got == want, format!("law n = {n}, m = {m}: {got} vs {want}"))?;
        }
    }
    within(t, Duration::from_secs(120), "tables")?;
    Ok("closed forms match expansion (n <= 3, m <= 3) and the composition law (n <= 5, m <= 6)".into())
}

fn c6() -> Outcome {
    for n in 3..=8 {
        let t = Instant::now();
        let r = certify_infinite_order(&qn(n).unwrap()).unwrap();
        check(matches!(r, InfiniteOrder::Infinite(_)), format!("n = {n}: {r:?}"))?;
        within(t, Duration::from_secs(1), &format!("n = {n}"))?;
    }
    Ok("Q_n certified of infinite order for n = 3..8".into())
}

fn c7() -> Outcome {
    for q in [2u64, 3, 4, 5] {
        let c = common::ctx(q, 1);
        let size = coset_rep_system(&c).len() as u64;
        check(size == q * (q + 1) / 2, format!("q = {q}: {size} representatives"))?;
    }
    let mut pairs = 0;
    for q in [2u64, 3] {
        for n in [1usize, 2] {
            let c = common::ctx(q, n);
            let sys = coset_rep_system(&c);
            for (i, a) in sys.reps().iter().enumerate() {
                let ai = a.inverse().to_ratfunc(&c).unwrap();
                for (j, b) in sys.reps().iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let d = delta(&compose(&ai, &b.to_ratfunc(&c).unwrap()).unwrap());
                    check(!both_nonzero(&d), format!("q = {q}: {a} and {b} share a coset"))?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("sizes q(q+1)/2 for q = 2..5; {pairs} ordered pairs distinct"))
}

fn sign_pair(ring: &DegreeRing, d: &DeltaPair) -> Option<(Ordering, Ordering)> {
    Some((ring.sign(d.dmax.finite()?), ring.sign(d.dmin.finite()?)))
}

fn c8() -> Outcome {
    const PER_CASE: usize = 200;
    let mut r = common::rng(8);
    let signs = [Ordering::Less, Ordering::Equal, Ordering::Greater];
    let mut total = 0;
    for (ci, (q, n)) in [(2u64, 2usize), (3, 2)].into_iter().enumerate() {
        let c = common::ctx(q, n);
        let ring = c.ring();
        for &sm in &signs {
            for &sn in &signs {
                // each sign case is split between F_2 and F_3
                let want = if ci == 0 { PER_CASE.div_ceil(2) } else { PER_CASE / 2 };
                let mut found = 0;
                let mut tries = 0;
                while found < want {
                    tries += 1;
                    if tries > 2_000_000 {
                        return Err(format!("could not sample g with signs ({sm:?}, {sn:?})"));
                    }
                    let g = common::rand_nonconstant(&c, &mut r, 3, 2);
                    if sign_pair(ring, &delta(&g)) != Some((sm, sn)) {
                        continue;
                    }
                    let f = common::rand_nonconstant(&c, &mut r, 3, 2);
                    let law = delta_of_composition(&f, &g).unwrap();
                    let direct = delta(&compose(&f, &g).unwrap());
                    check(law == direct, format!("f = {f}, g = {g}: law {law}, expansion {direct}"))?;
                    found += 1;
                }
                total += found;
            }
        }
    }
    Ok(format!("{total} pairs, {PER_CASE} per sign case of delta(g)"))
}

fn c9() -> Outcome {
    let mut r = common::rng(9);
    for i in 0..100 {
        let (q, n) = [(2u64, 2usize), (2, 3), (3, 2), (2, 4)][i % 4];
        let c = common::ctx(q, n);
        let ring = c.ring();
        let exps = |r: &mut rand_chacha::ChaCha8Rng| -> Vec<i64> {
            loop {
                let e: Vec<i64> = (0..n).map(|_| r.gen_range(-3..=3)).collect();
                if e.iter().any(|&x| x != 0) {
                    return e;
                }
            }
        };
        let (ea, eb) = (exps(&mut r), exps(&mut r));
        let a = RationalMonomial::new(ea.clone()).to_ratfunc(&c).unwrap();
        let b = RationalMonomial::new(eb.clone()).to_ratfunc(&c).unwrap();
        let (da, db) = (DegElem::from_i64s(&ea), DegElem::from_i64s(&eb));
        let sum = ring.add(&da, &db).unwrap();
        let prod = ring.mul(&da, &db).unwrap();
        check(delta(&a.mul(&b).unwrap()) == DeltaPair::finite(sum.clone(), sum), format!("product of {a} and {b}"))?;
        check(delta(&compose(&a, &b).unwrap()) == DeltaPair::finite(prod.clone(), prod), format!("composition of {a} and {b}"))?;
    }
    Ok("100 Laurent monomial pairs".into())
}

fn c10() -> Outcome {
    let r2 = DegreeRing::new(2, 2).unwrap();
    let nm = r2.norm(&DegElem::from_i64s(&[1, 1])).unwrap();
    check(nm == (-1).into(), format!("N(1+sqrt2) = {nm}"))?;
    let r6 = DegreeRing::new(6, 3).unwrap();
    for u in [[-2i64, 0, 0, 1, 0, 0], [-1, -1, 1, -1, 0, 1], [1, -1, -1, -1, 0, 1]] {
        check(r6.is_unit(&DegElem::from_i64s(&u)), format!("{u:?} is not a unit"))?;
    }
    Ok("N(1+sqrt2) = -1; three units of Z[3^(1/6)]".into())
}

fn c11() -> Outcome {
    let t = Instant::now();
    let c = common::ctx(2, 2);
    let mut table = GeneratorTable::new(&c);
    let m = table.parse_and_add("M", "x0x1", None).unwrap();
    let a = table.parse_and_add("A", "x0+1", None).unwrap();
    let choices = [-2i64, -1, 1, 2];
    let mut words = 0;
    for len in 1..=4u32 {
        for code in 0..4usize.pow(len) {
            let exps: Vec<i64> = (0..len).map(|i| choices[code / 4usize.pow(i) % 4]).collect();
            let f = word_expand(&table, &shape_word(m, a, &exps)).unwrap();
            check(!f.rat_eq(&x0(&c)), format!("{exps:?} expands to x0"))?;
            let want = word_delta_n2q2(&exps).unwrap();
            check(delta(&f) == want, format!("{exps:?}: {} vs {want}", delta(&f)))?;
            words += 1;
        }
    }
    within(t, Duration::from_secs(60), "enumeration")?;
    Ok(format!("{words} words, none trivial, closed forms match"))
}

fn c12() -> Outcome {
    let t = Instant::now();
    let c = common::ctx(2, 2);
    let r = derive_perm_poly(&parse(&c, "x0x1").unwrap(), None, 2, 3).map_err(|e| e.to_string())?;
    check(r.g.to_string() == "x^5", format!("g = {}", r.g))?;
    check(r.permutation, "x^5 does not permute F_8")?;
    let q = derive_perm_poly(&qn(2).unwrap(), Some(&qn_inverse(2).unwrap()), 2, 3).map_err(|e| e.to_string())?;
    check(q.injective_on_d, "Q_2 not injective on D")?;
    within(t, Duration::from_secs(5), "pipeline")?;
    Ok(format!("g = x^5 permutes F_8; Q_2 injective on |D| = {}", q.domain.len()))
}

fn c13() -> Outcome {
    let c2 = common::ctx(2, 2);
    for (text, clause) in [("x0+x1", "i"), ("(x0x1+1)/(x0x1+x0+1)", "iii")] {
        let rep = membership_necessary_checks(&parse(&c2, text).unwrap());
        let got = rep.first_failure().map(|c| c.clause);
        check(got == Some(clause), format!("{text}: first failing clause {got:?}, want {clause}"))?;
    }
    let rep = membership_necessary_checks(&qn(3).unwrap());
    check(rep.passed(), "Q_3 rejected")?;
    Ok("x0+x1 fails (i); (x0x1+1)/(x0x1+x0+1) fails (iii); Q_3 passes".into())
}

fn c14() -> Outcome {
    let mut r = common::rng(14);
    let c = common::ctx(2, 2);
    for _ in 0..50 {
        let (f, _) = common::rand_invertible(&c, &mut r);
        let (g, _) = common::rand_invertible(&c, &mut r);
        let lhs = embed(&compose(&f, &g).unwrap(), 4).unwrap();
        let rhs = compose(&embed(&f, 4).unwrap(), &embed(&g, 4).unwrap()).unwrap();
        check(lhs.rat_eq(&rhs), format!("psi_(2,4) fails on {f}, {g}"))?;
    }
    for i in 0..50 {
        let (q, n) = [(2u64, 2usize), (2, 3), (3, 2), (3, 6), (2, 4)][i % 5];
        let c = common::ctx(q, n);
        let ring = c.ring();
        let e1 = common::rand_unit(&c, &mut r, 2);
        let e2 = common::rand_unit(&c, &mut r, 2);
        let lhs = compose(&common::unit_monomial(&c, &e1), &common::unit_monomial(&c, &e2)).unwrap();
        let rhs = common::unit_monomial(&c, &ring.mul(&e1, &e2).unwrap());
        check(lhs.rat_eq(&rhs), format!("phi fails on {e1}, {e2}"))?;
    }
    Ok("50 cases each for psi_(2,4) and phi_n".into())
}

fn c15() -> Outcome {
    let c = common::ctx(2, 2);
    let e = DegElem::from_i64s(&[1, 1]);
    let f = compose(
        &compose(&parse(&c, "x0-1").unwrap(), &common::unit_monomial(&c, &e)).unwrap(),
        &parse(&c, "x0+1").unwrap(),
    )
    .unwrap();
    let want = DeltaPair::finite(e, DegElem::from_i64s(&[1, 0]));
    check(delta(&f) == want, format!("delta = {}", delta(&f)))?;
    Ok(format!("delta((x0-1) o x0x1 o (x0+1)) = {want}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 15] = [
        ("Q_2 involution", c1),
        ("inverse formula", c2),
        ("computer relation", c3),
        ("degree of Q_n", c4),
        ("iterate degree tables", c5),
        ("infinite order", c6),
        ("coset system", c7),
        ("degree composition laws", c8),
        ("monomial ring isomorphism", c9),
        ("unit facts", c10),
        ("word shapes", c11),
        ("permutation pipeline", c12),
        ("necessary-condition battery", c13),
        ("homomorphism suites", c14),
        ("surjectivity witness", c15),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
