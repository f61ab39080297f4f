//! Acceptance criteria, one PASS/FAIL line each. Runs with `harness = false`
//! so the lines are always printed; exits non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use noet::arith::{PrimeField, Rational};
use noet::cover::{extract_subcover, to_pseudoaffine, verify_cover_sample, verify_exact_line, PseudoaffineVariety, SubcoverOptions, SubcoverStatus, SAMPLE_PRIME};
use noet::formula::{parse_formula, FamilyPresentation, PropFormula};
use noet::galois::{closure_eq, eq_solution_set, hold_set, solution_set, AffineSpace, BoundedUniverse, EqSet, PointSet};
use noet::noether::{dennet_acf_check, dennet_r_first_failing_index, dennet_r_premise_holds, dennet_r_witness, lognet_refute_infinite, DennetOptions};
use noet::poly::Poly;
use noet::qe::{decide_exists_qbar, eliminate_all, eliminate_exists, LiteralConjunction, QeOptions};

const SEED: u64 = 20_240_601;

struct Verdict {
    pass: bool,
    detail: String,
    report: Value,
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::from_int(n) / Rational::from_int(d)
}

fn vars(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

// --- 1 ---------------------------------------------------------------------

fn lognet_suite() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut ok = 0;
    let mut witnesses = Vec::new();
    for _ in 0..100 {
        let size = rng.gen_range(0..=100);
        let mut set = BTreeSet::new();
        while set.len() < size {
            set.insert(rat(rng.gen_range(-1000..=1000), rng.gen_range(1..=50)));
        }
        let values: Vec<Rational> = set.into_iter().collect();
        let j: Vec<u64> = (1..=values.len() as u64).collect();
        let r = lognet_refute_infinite(&values, &j).expect("distinct values");
        let x: Rational = r.witness["x"].parse().unwrap();
        // each premise x != a evaluated from its own formula text
        let point = BTreeMap::from([("x".to_string(), x.clone())]);
        let all = values.iter().all(|a| {
            let f = parse_formula(&format!("x != {a}")).unwrap();
            f.matrix.eval_rational(&point).unwrap()
        });
        let goal_fails = !parse_formula("1 = 0").unwrap().matrix.eval_rational(&point).unwrap();
        if all && goal_fails && r.is_ok() {
            ok += 1;
        }
        witnesses.push(x.to_string());
    }
    // over F_p the whole family {x != a : a in F_p} already has no solutions
    let mut finite = Vec::new();
    for p in [2u64, 3, 5, 7] {
        let field = PrimeField::new(p).unwrap();
        let space = AffineSpace::new(field, &vars(&["x"])).unwrap();
        let family: Vec<PropFormula> = (0..p).map(|a| parse_formula(&format!("x != {a}")).unwrap().matrix).collect();
        let sol = solution_set(&family, &space).unwrap();
        let brute = (0..p).filter(|&x| (0..p).all(|a| x != a)).count();
        finite.push(sol.is_empty() && brute == 0);
    }
    let pass = ok == 100 && finite.iter().all(|&b| b);
    Verdict {
        pass,
        detail: format!("{ok}/100 witnesses verified; F_p families empty: {finite:?}"),
        report: json!({"witnesses": witnesses, "finite_field_empty": finite}),
    }
}

// --- 2 ---------------------------------------------------------------------

/// Sign of 1/i - x^2 in plain rational arithmetic.
fn premise_oracle(i: u64, x: &Rational) -> bool {
    slack_nonnegative(i, &(x.as_big() * x.as_big()))
}

fn slack_nonnegative(i: u64, x2: &BigRational) -> bool {
    BigRational::new_raw(BigInt::from(1), BigInt::from(i)) >= *x2
}

fn dennet_r_suite() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut ok = 0;
    let mut boundary_ok = true;
    let mut witnesses = Vec::new();
    let tiny = rat(1, 1_000_000);
    for _ in 0..100 {
        let size = rng.gen_range(0..=1000);
        let j: Vec<u64> = (0..size).map(|_| rng.gen_range(1..=1_000_000)).collect();
        let r = dennet_r_witness(&j).unwrap();
        let x: Rational = r.witness["x"].parse().unwrap();
        let x2 = x.as_big() * x.as_big();
        if !x.is_zero() && r.is_ok() && j.iter().all(|&i| slack_nonnegative(i, &x2)) {
            ok += 1;
        }
        // the witness is cut off exactly at the first index above 1/x^2
        let k = dennet_r_first_failing_index(&x).unwrap();
        boundary_ok &= !premise_oracle(k, &x) && premise_oracle(k - 1, &x);
        boundary_ok &= !dennet_r_premise_holds(k, &x).unwrap();
        if x.pow(2) > tiny {
            boundary_ok &= !premise_oracle(1_000_000, &x) && !dennet_r_premise_holds(1_000_000, &x).unwrap();
        }
        witnesses.push(x.to_string());
    }
    // premises up to 10^6 admit x^2 = 10^-6 but nothing larger
    let edge = rat(1, 1000);
    boundary_ok &= (1..=1_000_000u64).step_by(997).chain([1_000_000]).all(|i| dennet_r_premise_holds(i, &edge).unwrap());
    boundary_ok &= !dennet_r_premise_holds(1_000_000, &rat(1, 999)).unwrap();
    Verdict {
        pass: ok == 100 && boundary_ok,
        detail: format!("{ok}/100 witnesses verified; x^2 <= 1e-6 forcing check {}", if boundary_ok { "holds" } else { "fails" }),
        report: json!({"witnesses": witnesses, "forcing": boundary_ok}),
    }
}

// --- 3 ---------------------------------------------------------------------

fn random_eqs(rng: &mut ChaCha8Rng, u: &BoundedUniverse, max: usize) -> EqSet {
    let mut t = u.empty_set();
    for _ in 0..rng.gen_range(0..=max) {
        t.insert(rng.gen_range(0..u.size()));
    }
    t
}

fn random_points(rng: &mut ChaCha8Rng, s: &AffineSpace) -> PointSet {
    let mut a = s.empty_set();
    let density = rng.gen_range(0.0..1.0);
    for k in 0..s.size() {
        if rng.gen_bool(density) {
            a.insert(k);
        }
    }
    a
}

/// Zero set of a universe polynomial by substituting every point.
fn zero_set_oracle(f: &Poly, s: &AffineSpace, names: &[String], field: PrimeField) -> Vec<usize> {
    (0..s.size())
        .filter(|&k| {
            let pt: BTreeMap<String, Rational> = names
                .iter()
                .zip(s.point(k))
                .map(|(v, a)| (v.clone(), Rational::from_int(a)))
                .collect();
            let c = f.substitute_all(&pt).constant_term();
            c.reduce_mod(field).unwrap() == 0
        })
        .collect()
}

fn galois_suite() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let combos = [(2u64, 1usize), (2, 2), (3, 1), (3, 2), (5, 1), (5, 2)];
    let mut violations = [0usize; 7];
    let names = ["antitone_t", "antitone_a", "extensive_t", "extensive_a", "idempotent", "stable", "oracle"];
    let mut instances = 0;
    for (c, &(p, n)) in combos.iter().enumerate() {
        let field = PrimeField::new(p).unwrap();
        let names_v = vars(&["x", "y"][..n]);
        let space = AffineSpace::new(field, &names_v).unwrap();
        let universe = BoundedUniverse::new(&space, 2).unwrap();
        let count = 200 / combos.len() + usize::from(c < 200 % combos.len());
        for _ in 0..count {
            instances += 1;
            let t1 = random_eqs(&mut rng, &universe, 3);
            let mut t2 = t1.clone();
            for k in random_eqs(&mut rng, &universe, 2).indices() {
                t2.insert(k);
            }
            let a1 = random_points(&mut rng, &space);
            let mut a2 = a1.clone();
            for k in random_points(&mut rng, &space).indices() {
                a2.insert(k);
            }
            let s1 = eq_solution_set(&t1, &universe);
            let s2 = eq_solution_set(&t2, &universe);
            let c1 = closure_eq(&t1, &universe);
            let laws = [
                s2.is_subset(&s1),
                hold_set(&a2, &universe).is_subset(&hold_set(&a1, &universe)),
                t1.is_subset(&c1),
                a1.is_subset(&eq_solution_set(&hold_set(&a1, &universe), &universe)),
                closure_eq(&c1, &universe) == c1,
                eq_solution_set(&c1, &universe) == s1,
            ];
            for (v, ok) in violations.iter_mut().zip(laws) {
                *v += usize::from(!ok);
            }
            // the solution set of t1 recomputed point by point
            let mut direct: BTreeSet<usize> = (0..space.size()).collect();
            for k in t1.indices() {
                let z: BTreeSet<usize> = zero_set_oracle(&universe.poly(k), &space, &names_v, field).into_iter().collect();
                direct = direct.intersection(&z).copied().collect();
            }
            violations[6] += usize::from(direct != s1.indices().collect());
        }
    }
    let total: usize = violations.iter().sum();
    let per: BTreeMap<&str, usize> = names.iter().copied().zip(violations).collect();
    Verdict {
        pass: total == 0 && instances == 200,
        detail: format!("{instances} instances, {total} violations"),
        report: json!({"instances": instances, "violations": per}),
    }
}

// --- 4 ---------------------------------------------------------------------

fn random_poly(rng: &mut ChaCha8Rng, names: &[String]) -> Poly {
    let terms = rng.gen_range(1..=3);
    Poly::from_terms(
        names,
        (0..terms).map(|_| {
            let e = vec![rng.gen_range(0..4u32), rng.gen_range(0..2u32), rng.gen_range(0..2u32)];
            (e, Rational::from_int(rng.gen_range(-3i64..=3)))
        }),
    )
}

fn qe_suite() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let names = vars(&["y", "a", "b"]);
    let opts = QeOptions::default();
    let mut agree = 0;
    let mut outputs = Vec::new();
    for _ in 0..100 {
        let pos: Vec<Poly> = (0..rng.gen_range(0..=2)).map(|_| random_poly(&mut rng, &names)).collect();
        let neg: Vec<Poly> = (0..rng.gen_range(0..=1)).map(|_| random_poly(&mut rng, &names)).collect();
        let c = LiteralConjunction::new(pos, neg, "y");
        let f = eliminate_exists(&c, &opts).unwrap();
        for _ in 0..50 {
            let pt = BTreeMap::from([
                ("a".to_string(), rat(rng.gen_range(-3..=3), rng.gen_range(1..=3))),
                ("b".to_string(), rat(rng.gen_range(-3..=3), rng.gen_range(1..=3))),
            ]);
            let sub = |v: &[Poly]| -> Vec<Poly> { v.iter().map(|q| q.substitute_all(&pt)).collect() };
            let want = decide_exists_qbar(&sub(&c.pos), &sub(&c.neg)).unwrap();
            agree += usize::from(f.eval_rational(&pt).unwrap() == want);
        }
        outputs.push(f.to_string());
    }
    // worked examples, compared by evaluation on a grid of parameters
    let qe = |s: &str| eliminate_all(&parse_formula(s).unwrap(), &opts).unwrap();
    let equivalent = |f: &PropFormula, g: &str| {
        let g = parse_formula(g).unwrap().matrix;
        (-6..=6).all(|n| {
            let pt = BTreeMap::from([("x".to_string(), rat(n, 2))]);
            f.eval_rational(&pt).unwrap() == g.eval_rational(&pt).unwrap()
        })
    };
    let examples = [
        equivalent(&qe("exists y. x*y = 1"), "x != 0"),
        equivalent(&qe("exists y. y^2 = x"), "true"),
        (1..=10).all(|i| equivalent(&qe(&format!("exists y. {i}*(x^2 + y^2) = 1")), "true")),
    ];
    Verdict {
        pass: agree == 5000 && examples.iter().all(|&b| b),
        detail: format!("{agree}/5000 agreements; worked examples {examples:?}"),
        report: json!({"agreements": agree, "outputs": outputs, "examples": examples}),
    }
}

// --- 5 ---------------------------------------------------------------------

struct Instance {
    name: String,
    dim: usize,
    cover: bool,
    char_safe: bool,
    pieces: Vec<PseudoaffineVariety>,
    ambient: Vec<String>,
}

fn header<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("# {key}:")))
        .unwrap_or_else(|| panic!("missing header {key}"))
        .trim()
}

fn load_corpus() -> Vec<Instance> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut paths: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let text = std::fs::read_to_string(&path).unwrap();
            let dim: usize = header(&text, "dim").parse().unwrap();
            let fam = FamilyPresentation::parse(&text).unwrap();
            let formulas: Vec<_> = fam.iter().map(|r| r.unwrap().1).collect();
            let mut names: BTreeSet<String> = formulas.iter().flat_map(|f| f.free_vars()).collect();
            for v in ["x", "y"] {
                if names.len() < dim {
                    names.insert(v.to_string());
                }
            }
            let ambient: Vec<String> = names.into_iter().collect();
            let pieces = formulas.iter().map(|f| to_pseudoaffine(f.as_prop().unwrap(), &ambient).unwrap()).collect();
            Instance {
                name: path.file_stem().unwrap().to_string_lossy().into_owned(),
                dim,
                cover: header(&text, "expect") == "cover",
                char_safe: header(&text, "char_safe") == "true",
                pieces,
                ambient,
            }
        })
        .collect()
}

/// Rational point outside every piece, checked piece by piece.
fn outside_all(pieces: &[PseudoaffineVariety], pt: &BTreeMap<String, String>) -> bool {
    let pt: BTreeMap<String, Rational> = pt.iter().map(|(k, v)| (k.clone(), v.parse().unwrap())).collect();
    pieces.iter().all(|v| !v.contains_rational(&pt).unwrap())
}

fn subcover_suite() -> Verdict {
    let corpus = load_corpus();
    let opts = SubcoverOptions {
        scan_limit: 50,
        samples: 10_000,
        seed: SEED,
    };
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    let (mut line, mut plane, mut non) = (0, 0, 0);
    for inst in &corpus {
        let r = extract_subcover(inst.pieces.iter().cloned().map(Ok), &inst.ambient, &opts).unwrap();
        let mut checks = BTreeMap::new();
        let ok = if inst.cover {
            let chosen: Vec<&PseudoaffineVariety> = r.indices.iter().map(|&j| &inst.pieces[j as usize - 1]).collect();
            let mut ok = r.status == SubcoverStatus::Ok && !r.indices.is_empty();
            if inst.dim == 1 {
                let (covered, rest) = verify_exact_line(&chosen, &inst.ambient[0]).unwrap();
                checks.insert("exact", json!(rest.to_string()));
                ok &= covered;
                line += 1;
            } else {
                if inst.char_safe {
                    let s = verify_cover_sample(&inst.pieces, &r.indices, &inst.ambient, 101, 101 * 101, SEED).unwrap();
                    ok &= s.exhaustive && s.uncovered_count == 0;
                    checks.insert("f101_uncovered", json!(s.uncovered_count));
                }
                let s = verify_cover_sample(&inst.pieces, &r.indices, &inst.ambient, SAMPLE_PRIME, 10_000, SEED).unwrap();
                ok &= s.uncovered_count == 0;
                checks.insert("sampled_uncovered", json!(s.uncovered_count));
                plane += 1;
            }
            ok
        } else {
            non += 1;
            // an uncovered sample: the reported rational point, or points of F_101^n
            let all: Vec<u64> = (1..=inst.pieces.len() as u64).collect();
            let s = verify_cover_sample(&inst.pieces, &all, &inst.ambient, 101, 101u64.pow(inst.dim as u32), SEED).unwrap();
            let rational = r.uncovered_point.as_ref().is_some_and(|pt| outside_all(&inst.pieces, pt));
            checks.insert("f101_uncovered", json!(s.uncovered_count));
            checks.insert("rational_point", json!(r.uncovered_point));
            r.status == SubcoverStatus::NotCoveredWithin && (rational || s.uncovered_count > 0)
        };
        if !ok {
            failures.push(inst.name.clone());
        }
        rows.push(json!({"name": inst.name, "indices": r.indices, "status": r.status, "checks": checks}));
    }
    let sizes = line >= 8 && plane >= 8 && non >= 4 && corpus.len() >= 20;
    Verdict {
        pass: failures.is_empty() && sizes,
        detail: format!(
            "{} instances ({line} line covers, {plane} plane covers, {non} non-covers); failures {failures:?}",
            corpus.len()
        ),
        report: json!(rows),
    }
}

// --- 6 ---------------------------------------------------------------------

fn pipeline_suite() -> Verdict {
    let opts = DennetOptions {
        scan_limit: 20,
        samples: 10_000,
        seed: SEED,
        qe: QeOptions::default(),
    };
    let constant = FamilyPresentation::parse("@family i in 1..\nexists y. x*y = 1").unwrap();
    let a = dennet_acf_check(&constant, &parse_formula("!(x = 0)").unwrap(), &opts).unwrap();
    let circle = FamilyPresentation::parse("@family i in 1..\nexists y. i*(x^2 + y^2) = 1").unwrap();
    let b = dennet_acf_check(&circle, &parse_formula("x = 0").unwrap(), &opts).unwrap();
    let first = a.is_ok() && a.indices == [1] && a.sentence_check == Some(true);
    let second = b.status == "not_covered_within"
        && !b.premise_results.is_empty()
        && b.premise_results.iter().all(|p| p.eliminated.as_deref() == Some("true"));
    Verdict {
        pass: first && second,
        detail: format!(
            "constant family J = {:?}; circle family status {} with {} premises eliminated to true",
            a.indices,
            b.status,
            b.premise_results.iter().filter(|p| p.eliminated.as_deref() == Some("true")).count()
        ),
        report: json!({"constant": a, "circle": b}),
    }
}

// ---------------------------------------------------------------------------

type Criterion = (&'static str, fn() -> Verdict, Duration);

fn main() {
    let criteria: [Criterion; 6] = [
        ("1 lognet refutation", lognet_suite, Duration::from_secs(1)),
        ("2 real witnesses", dennet_r_suite, Duration::from_secs(1)),
        ("3 galois laws", galois_suite, Duration::from_secs(30)),
        ("4 qe differential", qe_suite, Duration::from_secs(60)),
        ("5 subcover corpus", subcover_suite, Duration::from_secs(120)),
        ("6 elimination pipeline", pipeline_suite, Duration::from_secs(10)),
    ];
    let mut all_pass = true;
    let mut first_reports = Vec::new();
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let v = run();
        let took = start.elapsed();
        let pass = v.pass && took < limit;
        all_pass &= pass;
        println!(
            "{} criterion {name}: {} [{:.2}s, limit {}s]",
            if pass { "PASS" } else { "FAIL" },
            v.detail,
            took.as_secs_f64(),
            limit.as_secs()
        );
        first_reports.push(serde_json::to_string(&v.report).unwrap());
    }
    let second: Vec<String> = criteria.iter().map(|(_, run, _)| serde_json::to_string(&run().report).unwrap()).collect();
    let same = first_reports == second;
    all_pass &= same;
    println!(
        "{} criterion 7 determinism: {} of 6 reports byte-identical on rerun",
        if same { "PASS" } else { "FAIL" },
        first_reports.iter().zip(&second).filter(|(a, b)| a == b).count()
    );
    if !all_pass {
        std::process::exit(1);
    }
}
