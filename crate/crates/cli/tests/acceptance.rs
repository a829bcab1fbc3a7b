//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the summary prints in order; exits non-zero on any failure.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use apollonia::disk::{tangency_spinor, Rational};
use apollonia::exact::fibonacci;
use apollonia::groups::{cayley_sphere_sizes, check_generator_properties, gen_m, gen_n};
use apollonia::packing::{adjacent_sums_report, complete, verify_packing};
use apollonia::quadruples::{descend4, geometrize, verify_geo, BASE_QUADRUPLE};
use apollonia::threads::{
    fibonacci_step_down, fibonacci_tangency_point, fibonacci_triple, root_atlas, thread_triple,
};
use apollonia::triples::descend3;
use apollonia::{
    CurvatureTriple, DescartesQuadruple, DiskSymbol, Error, Family, GroupSpec, Int, QuadMove,
    RationalMatrix, ThreadFamily,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

/// Best of `runs` timings; the first run's result is kept.
fn timed<T>(runs: usize, mut f: impl FnMut() -> T) -> (T, Duration) {
    let start = Instant::now();
    let first = f();
    let mut best = start.elapsed();
    for _ in 1..runs {
        let start = Instant::now();
        f();
        best = best.min(start.elapsed());
    }
    (first, best)
}

fn q(a: Int, b: Int, c: Int, d: Int) -> DescartesQuadruple {
    DescartesQuadruple::new(a, b, c, d)
}

fn t(a: Int, b: Int, c: Int) -> CurvatureTriple {
    CurvatureTriple::new(a, b, c)
}

fn descent_chain() -> Outcome {
    let d = descend3(&t(11, 14, 86)).map_err(err)?;
    let expected = vec![
        t(11, 14, 86),
        t(11, 14, 15),
        t(-6, 11, 14),
        t(-1, 2, 6),
        t(0, 1, 4),
        t(0, 1, 1),
        t(0, 0, 1),
    ];
    ensure(
        d.sorted_trace() == expected,
        format!("sorted trace {:?}", d.sorted_trace()),
    )?;
    let letters: String = d.moves.iter().map(|m| m.letter()).collect();
    ensure(letters == "DDSSDD", format!("moves {letters}"))?;

    let out = Command::new(env!("CARGO_BIN_EXE_apollonia"))
        .args(["descend", "--triple", "11,14,86"])
        .output()
        .map_err(|e| e.to_string())?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    let printed: Vec<&str> = stdout.lines().filter(|l| l.starts_with('(')).collect();
    let wanted: Vec<String> = expected.iter().map(ToString::to_string).collect();
    ensure(
        out.status.success() && printed == wanted,
        format!("CLI printed {printed:?}"),
    )?;
    ensure(stdout.contains("moves: DDSSDD"), "CLI move letters")?;
    Ok("7 triples, DDSSDD, CLI output identical".into())
}

fn hyper_integrality() -> Outcome {
    let roots = root_atlas(12).map_err(err)?;
    for r in &roots {
        let g = geometrize(&r.quad).map_err(err)?;
        ensure(g.curvatures() == r.quad, format!("{r}: curvature column"))?;
        let report = verify_geo(&g);
        ensure(report.passed(), format!("{r}:\n{report}"))?;
    }
    Ok(format!("{} roots verified", roots.len()))
}

fn window_rows() -> Outcome {
    let g = geometrize(&q(-1, 2, 2, 3)).map_err(err)?;
    let rows = [(0, 0, -1, 1), (-1, 0, 2, 0), (1, 0, 2, 0), (0, 2, 3, 1)]
        .map(|(a, b, c, d)| DiskSymbol::new_unchecked(a, b, c, d));
    ensure(g.disks == rows, format!("{:?}", g.disks))?;
    Ok("rows exact in slot order".into())
}

fn fig_spinor_norms() -> Outcome {
    let g = geometrize(&q(-6, 11, 14, 15)).map_err(err)?;
    let mut norms = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            norms.push(
                tangency_spinor(&g.disks[i], &g.disks[j])
                    .and_then(|u| u.norm2())
                    .map_err(err)?,
            );
        }
    }
    norms.sort_unstable();
    ensure(norms == [5, 8, 9, 25, 26, 29], format!("{norms:?}"))?;
    Ok(format!("{norms:?}"))
}

fn two_square_identities() -> Outcome {
    let g = geometrize(&q(-1, 2, 2, 3)).map_err(err)?;
    let p = complete(&g, 100, None).map_err(err)?;
    let sums = adjacent_sums_report(&p);
    let failing = sums.iter().filter(|s| !s.holds).count();
    ensure(failing == 0, format!("{failing} edges fail"))?;
    for (a, b, sq) in [(-1, 6, (1, 2)), (3, 6, (0, 3)), (6, 23, (2, 5))] {
        let found = sums.iter().any(|s| {
            let pair = (
                s.curvatures.0.min(s.curvatures.1),
                s.curvatures.0.max(s.curvatures.1),
            );
            pair == (a, b) && s.sum == a + b && s.squares == sq
        });
        ensure(found, format!("edge ({a},{b}) with {sq:?}"))?;
    }
    Ok(format!("{} edges, all m²+n² = sum", sums.len()))
}

fn curvature_membership() -> Outcome {
    let g = geometrize(&q(-1, 2, 2, 3)).map_err(err)?;
    let p = complete(&g, 50, None).map_err(err)?;
    let got: BTreeSet<Int> = p.disks.iter().map(|d| d.curv).collect();
    let expected: BTreeSet<Int> = [
        -1, 2, 3, 6, 11, 14, 15, 18, 23, 26, 27, 30, 35, 38, 39, 42, 47, 50,
    ]
    .into();
    ensure(got == expected, format!("{got:?}"))?;
    ensure(verify_packing(&p).passed(), "packing verification")?;
    Ok(format!("{} disks, curvature set matches", p.disks.len()))
}

fn group_properties() -> Outcome {
    for m in [2, 4, 5, 6] {
        let r = check_generator_properties(m).map_err(err)?;
        ensure(
            r.involution && r.orthogonality && r.det_minus_one && r.cross_commutation == Some(true),
            format!("m={m}: {r:?}"),
        )?;
    }
    ensure(
        check_generator_properties(4)
            .map_err(err)?
            .transpose_duality
            == Some(true),
        "m=4 duality",
    )?;
    ensure(
        check_generator_properties(5)
            .map_err(err)?
            .transpose_duality
            == Some(false),
        "m=5 duality",
    )?;
    ensure(
        (1..=3).all(|i| gen_m(3, i) == Err(Error::DimThreeUndefined)),
        "gen_M(3,·)",
    )?;
    Ok("m = 2,4,5,6 hold; duality holds at 4, fails at 5".into())
}

fn bethe_spheres() -> Outcome {
    let kal4 = GroupSpec::new(4, Family::Kal).map_err(err)?;
    let sizes = cayley_sphere_sizes(&kal4, 5).map_err(err)?;
    ensure(
        sizes == [1, 4, 12, 36, 108, 324],
        format!("Kal(4) {sizes:?}"),
    )?;
    let des4 = GroupSpec::new(4, Family::Des).map_err(err)?;
    let des = cayley_sphere_sizes(&des4, 2).map_err(err)?;
    ensure(des[2] < 8 * 7, format!("Des(4) {des:?}"))?;
    let (m1, n2) = (gen_m(4, 1).map_err(err)?, gen_n(4, 2).map_err(err)?);
    let word = &(&(&m1 * &n2) * &m1) * &n2;
    ensure(word == RationalMatrix::identity(4), "M1 N2 M1 N2 ≠ id")?;
    Ok(format!(
        "Kal(4) {sizes:?}; Des(4) depth 2 = {} < 56",
        des[2]
    ))
}

fn table_threads() -> Outcome {
    for family in ThreadFamily::ALL {
        for n in 1..=20 {
            let tt = thread_triple(family, n).map_err(err)?;
            ensure(tt.proper, format!("{family} n={n} not proper"))?;
            let formula = family.fourth_formula(n).map_err(err)?;
            ensure(
                tt.fourth == formula,
                format!("{family} n={n}: {:?} vs {formula:?}", tt.fourth),
            )?;
        }
    }
    Ok("7 families × 20".into())
}

fn fibonacci_thread() -> Outcome {
    for n in 2..=12 {
        let tt = fibonacci_triple(n).map_err(err)?;
        let f = |k| fibonacci(k).map_err(err);
        ensure(
            tt.triple == t(-f(2 * n)?, f(2 * n + 1)?, f(2 * n + 2)?),
            format!("n={n} triple"),
        )?;
        let centre = 2 * f(2 * n + 1)?;
        ensure(
            tt.proper && tt.fourth == (centre - 2, centre + 2),
            format!("n={n}: {tt}"),
        )?;
        let down = fibonacci_step_down(n).map_err(err)?;
        ensure(
            down == fibonacci_triple(n - 1).map_err(err)?.triple,
            format!("n={n} step down"),
        )?;
    }
    let one = Rational::from(1);
    for n in 1..=15 {
        let p = fibonacci_tangency_point(n).map_err(err)?;
        let (x, y) = p.point;
        ensure(
            (x + one) * (x + one) + (y - one) * (y - one) == one,
            format!("P_{n} off circle"),
        )?;
    }
    Ok("n = 2..12 triples, P_1..P_15 on circle".into())
}

/// A random member of the set reached by weight-increasing moves from the base.
fn random_member(rng: &mut ChaCha8Rng) -> Result<DescartesQuadruple, String> {
    let len = rng.gen_range(1..=12);
    let mut v = BASE_QUADRUPLE;
    for _ in 0..len {
        let w = v.weight().map_err(err)?;
        let ups: Vec<DescartesQuadruple> = (1..=4)
            .flat_map(|s| [QuadMove::m(s), QuadMove::n(s)])
            .filter_map(|mv| apollonia::quadruples::apply_move(&v, mv).ok())
            .filter(|u| u.weight().is_ok_and(|x| x > w))
            .collect();
        v = ups[rng.gen_range(0..ups.len())];
    }
    Ok(v)
}

fn round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0011);
    let mut max_weight = 0;
    for k in 0..500 {
        let v = random_member(&mut rng)?;
        v.validate().map_err(|e| format!("sample {k}: {e}"))?;
        let d = descend4(&v).map_err(err)?;
        ensure(
            d.final_quad().is_base(),
            format!("{v}: ends at {}", d.final_quad()),
        )?;
        let w = d.weights().map_err(err)?;
        ensure(
            w.windows(2).all(|p| p[1] < p[0]),
            format!("{v}: weights {w:?}"),
        )?;
        max_weight = max_weight.max(w[0]);
        let g = geometrize(&v).map_err(err)?;
        ensure(g.curvatures() == v, format!("{v}: curvature column"))?;
        let report = verify_geo(&g);
        ensure(report.passed(), format!("{v}:\n{report}"))?;
    }
    Ok(format!("500 members, max weight {max_weight}"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    runs: usize,
    check: fn() -> Outcome,
}

fn main() {
    let ms = Duration::from_millis;
    let criteria = [
        Criterion {
            id: 1,
            name: "descent chain fidelity",
            limit: Some(ms(10)),
            runs: 3,
            check: descent_chain,
        },
        Criterion {
            id: 2,
            name: "hyper-integrality of atlas roots",
            limit: Some(ms(1000)),
            runs: 1,
            check: hyper_integrality,
        },
        Criterion {
            id: 3,
            name: "window root geometrization",
            limit: Some(ms(10)),
            runs: 3,
            check: window_rows,
        },
        Criterion {
            id: 4,
            name: "spinor norms of (-6,11,14,15)",
            limit: None,
            runs: 1,
            check: fig_spinor_norms,
        },
        Criterion {
            id: 5,
            name: "two-square identities",
            limit: Some(ms(1000)),
            runs: 1,
            check: two_square_identities,
        },
        Criterion {
            id: 6,
            name: "packing curvature membership",
            limit: Some(ms(1000)),
            runs: 1,
            check: curvature_membership,
        },
        Criterion {
            id: 7,
            name: "group properties",
            limit: Some(ms(100)),
            runs: 3,
            check: group_properties,
        },
        Criterion {
            id: 8,
            name: "Bethe-lattice spheres",
            limit: Some(ms(10_000)),
            runs: 1,
            check: bethe_spheres,
        },
        Criterion {
            id: 9,
            name: "thread families",
            limit: Some(ms(100)),
            runs: 3,
            check: table_threads,
        },
        Criterion {
            id: 10,
            name: "Fibonacci thread",
            limit: Some(ms(10)),
            runs: 3,
            check: fibonacci_thread,
        },
        Criterion {
            id: 11,
            name: "round-trip property suite",
            limit: Some(ms(30_000)),
            runs: 1,
            check: round_trip,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let (outcome, elapsed) = timed(c.runs, c.check);
        let slow = c.limit.is_some_and(|l| elapsed >= l);
        let limit = c
            .limit
            .map_or("none".to_owned(), |l| format!("{} ms", l.as_millis()));
        let time = format!("{:.3} ms, limit {limit}", elapsed.as_secs_f64() * 1e3);
        match outcome {
            Ok(detail) if !slow => println!("PASS  [{:>2}] {}: {detail} ({time})", c.id, c.name),
            Ok(detail) => {
                failed += 1;
                println!(
                    "FAIL  [{:>2}] {}: too slow; {detail} ({time})",
                    c.id, c.name
                );
            }
            Err(msg) => {
                failed += 1;
                println!("FAIL  [{:>2}] {}: {msg} ({time})", c.id, c.name);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
