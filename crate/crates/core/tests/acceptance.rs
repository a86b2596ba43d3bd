use std::collections::{BTreeSet, HashMap};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use arrcensus_core::affine::{cross_check, simplex_signature, special_point, swap_check};
use arrcensus_core::chambers::{adjacency, enumerate_chambers, ChamberCatalog};
use arrcensus_core::charpoly::{
    combinatorial_charpoly, iso_class_count, poset_charpoly, whitney_charpoly, zaslavsky_regions,
    CharPolynomial,
};
use arrcensus_core::concurrency::{
    concurrency_closure, concurrency_orders, enumerate_closed_collections, is_concurrency_free,
    is_closed, ConcurrencyVerdict, SubsetCollection,
};
use arrcensus_core::discriminantal::DiscriminantalArrangement;
use arrcensus_core::normal_system::{
    alternate_slopes_six_lines, falk_six_planes, perpendicular_pairs_six_lines,
    random_normal_system, Arrangement, NormalSystem,
};
use arrcensus_core::region_census;
use arrcensus_core::{affine::RegionCensus, linalg::Rational};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

struct Instance {
    ns: NormalSystem,
    da: DiscriminantalArrangement,
    poly: CharPolynomial,
    catalog: Option<ChamberCatalog>,
}

#[derive(Default)]
struct Ctx {
    instances: HashMap<&'static str, Instance>,
}

impl Ctx {
    fn instance(&mut self, key: &'static str) -> &mut Instance {
        self.instances.entry(key).or_insert_with(|| {
            let ns = system_for(key);
            let da = DiscriminantalArrangement::build(&ns);
            let poly = poset_charpoly(&da).expect("poset method runs");
            Instance {
                ns,
                da,
                poly,
                catalog: None,
            }
        })
    }

    fn catalog(&mut self, key: &'static str) -> &ChamberCatalog {
        let inst = self.instance(key);
        if inst.catalog.is_none() {
            inst.catalog = Some(enumerate_chambers(&inst.da).expect("chambers enumerate"));
        }
        inst.catalog.as_ref().unwrap()
    }
}

/// First seed whose sample is concurrency free; planar samples are
/// relabelled by angle.
fn free_system(n: usize, m: usize) -> NormalSystem {
    (1u64..)
        .map(|seed| random_normal_system(n, m, seed, 12).unwrap().system)
        .map(|ns| if m == 2 { ns.angle_sorted().unwrap() } else { ns })
        .find(|ns| is_concurrency_free(ns).unwrap().is_free())
        .unwrap()
}

fn system_for(key: &str) -> NormalSystem {
    match key {
        "n4" => free_system(4, 2),
        "n5" => free_system(5, 2),
        "cf62" => free_system(6, 2),
        "cf63" => free_system(6, 3),
        "perp" => perpendicular_pairs_six_lines(),
        "alt" => alternate_slopes_six_lines(),
        "falk" => falk_six_planes(),
        _ => unreachable!("unknown instance {key}"),
    }
}

fn poly(coeffs: &[i64]) -> CharPolynomial {
    CharPolynomial::from_i64(coeffs)
}

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn cones_and_classes(p: &CharPolynomial) -> (BigInt, BigInt) {
    (zaslavsky_regions(p), iso_class_count(p).unwrap())
}

fn poly_cones_classes(
    ctx: &mut Ctx,
    key: &'static str,
    expected: &[i64],
    cones: i64,
    classes: i64,
) -> Outcome {
    let inst = ctx.instance(key);
    check(inst.poly == poly(expected), format!("{key}: χ = {}", inst.poly))?;
    let (r, c) = cones_and_classes(&inst.poly);
    check(r == cones.into(), format!("{key}: cones {r}"))?;
    check(c == classes.into(), format!("{key}: classes {c}"))?;
    Ok(format!("χ = {}, cones {r}, classes {c}", inst.poly))
}

fn c1(ctx: &mut Ctx) -> Outcome {
    let out = poly_cones_classes(ctx, "n4", &[1, -4, 3, 0, 0], 8, 4)?;
    check(ctx.catalog("n4").class_count() == 4, "catalog classes")?;
    Ok(out)
}

fn c2(ctx: &mut Ctx) -> Outcome {
    let out = poly_cones_classes(ctx, "n5", &[1, -10, 30, -21, 0, 0], 62, 31)?;
    check(ctx.catalog("n5").class_count() == 31, "catalog classes")?;
    Ok(out)
}

fn c3(ctx: &mut Ctx) -> Outcome {
    let out = poly_cones_classes(ctx, "cf62", &[1, -20, 145, -426, 300, 0, 0], 892, 446)?;
    let inst = ctx.instance("cf62");
    let brute = whitney_charpoly(&inst.da).map_err(|e| e.to_string())?;
    check(brute == inst.poly, format!("subset sum gives {brute}"))?;
    Ok(format!("{out}; subset sum agrees"))
}

fn c4(ctx: &mut Ctx) -> Outcome {
    let perp = zaslavsky_regions(&ctx.instance("perp").poly);
    let alt = zaslavsky_regions(&ctx.instance("alt").poly);
    check(perp == 884.into(), format!("perpendicular pairs: {perp}"))?;
    check(alt == 888.into(), format!("alternate slopes: {alt}"))?;
    Ok(format!("perpendicular pairs {perp}, alternate slopes {alt}"))
}

fn c5(ctx: &mut Ctx) -> Outcome {
    let out = poly_cones_classes(ctx, "cf63", &[1, -15, 69, -55, 0, 0, 0], 140, 70)?;
    let falk = zaslavsky_regions(&ctx.instance("falk").poly);
    check(falk == 132.into(), format!("Falk: {falk}"))?;
    Ok(format!("{out}; Falk {falk}"))
}

fn c6(_: &mut Ctx) -> Outcome {
    let mut cones = Vec::new();
    let mut classes = Vec::new();
    for n in 3..=6 {
        let p = combinatorial_charpoly(n, 2).map_err(|e| e.to_string())?;
        let (r, c) = cones_and_classes(&p);
        cones.push(r);
        classes.push(c);
    }
    let want_cones: Vec<BigInt> = [2, 8, 62, 892].map(BigInt::from).to_vec();
    let want_classes: Vec<BigInt> = [1, 4, 31, 446].map(BigInt::from).to_vec();
    check(cones == want_cones, format!("cones {cones:?}"))?;
    check(classes == want_classes, format!("classes {classes:?}"))?;
    Ok("cones 2, 8, 62, 892; classes 1, 4, 31, 446".into())
}

fn c7(ctx: &mut Ctx) -> Outcome {
    let mut parts = Vec::new();
    for key in ["n4", "n5", "cf62", "perp", "alt", "cf63", "falk"] {
        let chambers = ctx.catalog(key).len();
        let regions = zaslavsky_regions(&ctx.instance(key).poly);
        check(
            BigInt::from(chambers) == regions,
            format!("{key}: {chambers} chambers vs {regions}"),
        )?;
        parts.push(format!("{key} {chambers}"));
    }
    Ok(parts.join(", "))
}

fn c8(ctx: &mut Ctx) -> Outcome {
    let mut parts = Vec::new();
    for key in ["n4", "n5"] {
        let catalog = ctx.catalog(key).clone();
        let ns = ctx.instance(key).ns.clone();
        let report = cross_check(&ns, &catalog).map_err(|e| e.to_string())?;
        check(
            report.passed(),
            format!("{key}: mismatches {:?}", report.mismatches),
        )?;
        parts.push(format!("{key}: {} pairs, 0 mismatches", report.pairs));
    }
    Ok(parts.join("; "))
}

/// Triangle sets transcribed for five lines; each family also stands for its
/// cyclic translates `i -> i + 1 (mod 5)`.
const FIVE_LINE_FAMILIES: [&[&str]; 7] = [
    &["124", "245", "235", "135", "134"],
    &["123", "235", "245", "145"],
    &["135", "125", "124"],
    &["123", "125", "145"],
    &["134", "235", "245"],
    &["345", "123", "245"],
    &["235", "234", "145"],
];

fn five_line_signatures() -> BTreeSet<BTreeSet<String>> {
    let shift = |t: &str, k: u32| -> String {
        let mut d: Vec<u32> = t
            .chars()
            .map(|c| (c.to_digit(10).unwrap() - 1 + k) % 5 + 1)
            .collect();
        d.sort_unstable();
        d.iter().map(|x| x.to_string()).collect()
    };
    let mut out = BTreeSet::new();
    for family in FIVE_LINE_FAMILIES {
        for k in 0..5 {
            out.insert(family.iter().map(|t| shift(t, k)).collect());
        }
    }
    out
}

fn label(triple: &[usize]) -> String {
    triple.iter().map(|i| i.to_string()).collect()
}

fn c9(ctx: &mut Ctx) -> Outcome {
    let catalog = ctx.catalog("n5").clone();
    let ns = ctx.instance("n5").ns.clone();
    let mut by_class: HashMap<usize, BTreeSet<String>> = HashMap::new();
    for c in &catalog.chambers {
        let arr = Arrangement::new(ns.clone(), c.witness.clone()).map_err(|e| e.to_string())?;
        let sig: BTreeSet<String> = simplex_signature(&arr)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|t| label(t))
            .collect();
        if let Some(prev) = by_class.insert(c.class, sig.clone()) {
            check(prev == sig, format!("class {} has two signatures", c.class))?;
        }
    }
    let found: BTreeSet<BTreeSet<String>> = by_class.into_values().collect();
    let expected = five_line_signatures();
    check(expected.len() == 31, format!("transcription gives {}", expected.len()))?;
    check(found == expected, format!("{} signatures differ from the list", found.len()))?;
    Ok("31 distinct triangle sets, equal to the seven families with translates".into())
}

fn c10(ctx: &mut Ctx) -> Outcome {
    let catalog = ctx.catalog("n4").clone();
    let ns = ctx.instance("n4").ns.clone();
    // Special point -> triangles, from the four-line table.
    let table: HashMap<[usize; 2], BTreeSet<String>> = [
        ([1, 2], ["123", "124"]),
        ([2, 3], ["123", "234"]),
        ([3, 4], ["134", "234"]),
        ([1, 4], ["124", "134"]),
    ]
    .into_iter()
    .map(|(p, t)| (p, t.iter().map(|s| s.to_string()).collect()))
    .collect();
    let mut per_class: BTreeSet<(usize, [usize; 2])> = BTreeSet::new();
    for c in &catalog.chambers {
        let arr = Arrangement::new(ns.clone(), c.witness.clone()).map_err(|e| e.to_string())?;
        let p = special_point(&arr).map_err(|e| e.to_string())?;
        let tri: BTreeSet<String> = simplex_signature(&arr)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|t| label(t))
            .collect();
        check(table.get(&p) == Some(&tri), format!("special point {p:?} with {tri:?}"))?;
        per_class.insert((c.class, p));
    }
    let points: BTreeSet<[usize; 2]> = per_class.iter().map(|(_, p)| *p).collect();
    check(per_class.len() == 4, "one special point per class")?;
    check(
        points == table.keys().copied().collect(),
        format!("points {points:?}"),
    )?;
    let da = &ctx.instance("n4").da;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut sampled = 0;
    while sampled < 1000 {
        let b: Vec<Rational> = (0..4)
            .map(|_| Rational::from_integer(rng.gen_range(-60i64..=60).into()))
            .collect();
        if !matches!(da.signs_at(&b), Ok(Ok(_))) {
            continue;
        }
        let arr = Arrangement::new(ns.clone(), b).unwrap();
        let p = special_point(&arr).map_err(|e| e.to_string())?;
        check(p != [1, 3] && p != [2, 4], format!("special point {p:?} occurred"))?;
        sampled += 1;
    }
    Ok("(12), (23), (34), (14) one per class; no (13) or (24) in 1000 samples".into())
}

fn c11(_: &mut Ctx) -> Outcome {
    let coll = |n, s: &[[usize; 3]]| {
        SubsetCollection::new(n, 2, &s.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
    };
    let d1 = coll(6, &[[1, 2, 6], [1, 3, 5], [2, 3, 4]]);
    check(is_closed(&d1), "D1 closed")?;
    let d2 = d1.union(&coll(6, &[[4, 5, 6]]));
    let e = SubsetCollection::full(6, 2);
    check(concurrency_closure(&d2) == e, "closure of D2 is E")?;
    let orders = |d: &SubsetCollection| -> Vec<usize> {
        concurrency_orders(d).unwrap().iter().map(|c| c.order).collect()
    };
    check(orders(&d1) == vec![3, 3, 3], "D1 orders")?;
    check(orders(&e) == vec![6], "E orders")?;
    let closed = enumerate_closed_collections(4, 2).map_err(|e| e.to_string())?;
    let mut expected: Vec<SubsetCollection> = [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]]
        .iter()
        .map(|s| coll(4, &[*s]))
        .collect();
    expected.push(SubsetCollection::full(4, 2));
    check(closed == expected, format!("n = 4 closed collections {closed:?}"))?;
    Ok("D1 closed, closure(D2) = E, orders {3,3,3} and {6}, five closed collections".into())
}

fn c12(_: &mut Ctx) -> Outcome {
    let mut witnesses = Vec::new();
    for (name, ns) in [
        ("perpendicular pairs", perpendicular_pairs_six_lines()),
        ("Falk", falk_six_planes()),
    ] {
        match is_concurrency_free(&ns).map_err(|e| e.to_string())? {
            ConcurrencyVerdict::Free => return Err(format!("{name} reported free")),
            ConcurrencyVerdict::NotFree(w) => {
                witnesses.push(format!("{name} {} forces {}", w.collection, w.forced))
            }
        }
    }
    for n in [4, 5] {
        for seed in 0..20 {
            let ns = random_normal_system(n, 2, seed, 9).unwrap().system;
            check(
                is_concurrency_free(&ns).unwrap().is_free(),
                format!("n = {n} seed {seed} not free"),
            )?;
        }
    }
    Ok(format!("{}; 40 planar systems free", witnesses.join("; ")))
}

fn c13(ctx: &mut Ctx) -> Outcome {
    let mut parts = Vec::new();
    for key in ["n4", "n5"] {
        let catalog = ctx.catalog(key).clone();
        let inst = ctx.instance(key);
        let edges = adjacency(&inst.da, &catalog);
        for e in &edges {
            for (a, b) in [(e.a, e.b), (e.b, e.a)] {
                let report =
                    swap_check(&inst.ns, &inst.da, &catalog, a, b).map_err(|e| e.to_string())?;
                check(report.passed, format!("{key}: edge {a}-{b} fails"))?;
            }
        }
        parts.push(format!("{key}: {} edges", edges.len()));
    }
    Ok(parts.join(", "))
}

fn c14(ctx: &mut Ctx) -> Outcome {
    let mut polys: Vec<(usize, usize, CharPolynomial)> = Vec::new();
    for key in ["n4", "n5", "cf62", "perp", "alt", "cf63", "falk"] {
        let inst = ctx.instance(key);
        polys.push((inst.ns.n(), inst.ns.m(), inst.poly.clone()));
    }
    for (n, m) in [(6, 2), (6, 3), (7, 2), (7, 3)] {
        polys.push((n, m, combinatorial_charpoly(n, m).unwrap()));
    }
    for (n, m, p) in &polys {
        let e = arrcensus_core::subsets::binomial(*n, m + 1);
        check(p.has_alternating_signs(), format!("{p}: signs"))?;
        check(p.divisible_by_x_pow_times_x_minus_one(*m), format!("{p}: x^m(x-1)"))?;
        check(p.eval(&BigInt::from(1)) == BigInt::from(0), format!("{p}: χ(1)"))?;
        check(
            p.degree() == *n
                && p.coefficient(*n) == 1.into()
                && p.coefficient(n - 1) == -BigInt::from(e),
            format!("{p}: leading terms"),
        )?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut census_runs = 0;
    for m in 2..=3 {
        for n in m + 1..=7 {
            let ns = random_normal_system(n, m, rng.gen(), 9).unwrap().system;
            let da = DiscriminantalArrangement::build(&ns);
            let b = loop {
                let b: Vec<Rational> = (0..n)
                    .map(|_| Rational::from_integer(rng.gen_range(-40i64..=40).into()))
                    .collect();
                if matches!(da.signs_at(&b), Ok(Ok(_))) {
                    break b;
                }
            };
            let census = region_census(&Arrangement::new(ns, b).unwrap()).unwrap();
            check(
                census == RegionCensus::generic(n, m),
                format!("n = {n}, m = {m}: {census:?}"),
            )?;
            census_runs += 1;
        }
    }
    Ok(format!(
        "{} polynomials, {census_runs} region censuses",
        polys.len()
    ))
}

type Criterion = (usize, &'static str, Duration, fn(&mut Ctx) -> Outcome);

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 14] = [
        (1, "four lines: polynomial, cones, classes", secs(1), c1),
        (2, "five lines: polynomial, cones, classes", secs(5), c2),
        (3, "concurrency-free (6,2) polynomial and cones", secs(120), c3),
        (4, "six-line special systems: 884 and 888 cones", secs(240), c4),
        (5, "concurrency-free (6,3) and Falk system", secs(240), c5),
        (6, "planar census n = 3..6", secs(120), c6),
        (7, "chamber counts equal Zaslavsky counts", secs(600), c7),
        (8, "classes agree with vertex-order isomorphism", secs(120), c8),
        (9, "five-line triangle signatures", secs(60), c9),
        (10, "four-line special points", secs(60), c10),
        (11, "closure golden cases", secs(10), c11),
        (12, "concurrency-freeness verdicts", secs(120), c12),
        (13, "swap property on every adjacency edge", secs(120), c13),
        (14, "polynomial and region-count properties", secs(300), c14),
    ];
    let mut ctx = Ctx::default();
    let mut failed = 0;
    for (id, title, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run(&mut ctx);
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; took {elapsed:?}, limit {limit:?}")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {id:>2} {}  {title} ({:.2}s): {detail}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 14 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
