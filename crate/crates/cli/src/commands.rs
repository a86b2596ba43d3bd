use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use arrcensus_core::affine::{self, RegionCensus};
use arrcensus_core::chambers::{self, ChamberCatalog, Classification, SignVector};
use arrcensus_core::charpoly::{self, CharPolynomial};
use arrcensus_core::concurrency::{self, ConcurrencyVerdict, SubsetCollection};
use arrcensus_core::linalg::{format_rational, Rational};
use arrcensus_core::{Arrangement, DiscriminantalArrangement, NormalSystem};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::{Outcome, Recorder, Table};
use crate::{CensusMode, Limits, Method};

fn read_input(rec: &mut Recorder, name: &str, path: &Path) -> Result<Vec<u8>> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    rec.input(name, &bytes);
    Ok(bytes)
}

fn load_ns(rec: &mut Recorder, path: &Path) -> Result<NormalSystem> {
    let bytes = read_input(rec, "ns", path)?;
    rec.phase("load", || serde_json::from_slice(&bytes))
        .with_context(|| format!("parsing normal system {}", path.display()))
}

fn record_b(rec: &mut Recorder, name: &str, b: &[Rational]) {
    rec.input(name, rationals(b).join(",").as_bytes());
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn label(subset: &[usize]) -> String {
    subset.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

/// Integers that fit in 64 bits stay JSON numbers; larger ones become strings.
fn big(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(small) => json!(small),
        Err(_) => json!(v.to_string()),
    }
}

fn out_path(out: &Option<PathBuf>) -> Value {
    out.as_ref().map_or(Value::Null, |p| json!(p.display().to_string()))
}

fn arrangement(ns: &NormalSystem, b: Vec<Rational>) -> Result<Arrangement> {
    Ok(Arrangement::new(ns.clone(), b)?)
}

pub fn gen(rec: &mut Recorder, n: usize, m: usize, seed: u64, bound: u32, out: Option<PathBuf>) -> Result<Outcome> {
    rec.seed = Some(seed);
    let sampled = rec.phase("sample", || arrcensus_core::random_normal_system(n, m, seed, bound))?;
    let file = sampled.system.to_file();
    if let Some(path) = &out {
        write_json(path, &file)?;
    }
    let mut header = vec!["row".to_string()];
    header.extend((1..=m).map(|j| format!("a{j}")));
    let mut table = Table { header, rows: Vec::new() };
    let mut text = format!("normal system n={n} m={m} seed={seed} bound={bound} rejections={}\n", sampled.rejections);
    for (i, row) in file.rows.iter().enumerate() {
        let entries = rationals(row);
        text += &format!("  {:>2}: {}\n", i + 1, entries.join(" "));
        let mut r = vec![(i + 1).to_string()];
        r.extend(entries);
        table.push(r);
    }
    Ok(Outcome {
        payload: json!({
            "n": n, "m": m, "bound": bound,
            "rejections": sampled.rejections,
            "system": file,
            "out": out_path(&out),
        }),
        text,
        table,
        failed: None,
    })
}

pub fn disc(rec: &mut Recorder, ns_path: &Path, out: Option<PathBuf>) -> Result<Outcome> {
    let ns = load_ns(rec, ns_path)?;
    let da = rec.phase("build", || DiscriminantalArrangement::build(&ns));
    let file = da.to_file();
    if let Some(path) = &out {
        write_json(path, &file)?;
    }
    let mut table = Table::new(&["subset", "normal"]);
    let mut text = format!(
        "{} hyperplanes in dimension {}, common intersection of dimension {}\n",
        da.len(),
        da.n(),
        da.common_intersection_dim()
    );
    for idx in 0..da.len() {
        let subset = label(&da.universe().labels(idx));
        let normal = rationals(da.normal(idx)).join(" ");
        text += &format!("  {{{subset}}}: ({normal})\n");
        table.push(vec![subset, normal]);
    }
    Ok(Outcome {
        payload: json!({
            "n": da.n(), "m": da.m(),
            "hyperplanes": da.len(),
            "common_intersection_dim": da.common_intersection_dim(),
            "arrangement": file,
            "out": out_path(&out),
        }),
        text,
        table,
        failed: None,
    })
}

fn polynomial(rec: &mut Recorder, limits: &Limits, ns: &NormalSystem, method: Method) -> Result<CharPolynomial> {
    let p = match method {
        Method::Combinatorial => rec.phase("charpoly", || charpoly::combinatorial_charpoly(ns.n(), ns.m()))?,
        Method::Whitney | Method::Poset => {
            let da = rec.phase("build", || DiscriminantalArrangement::build(ns));
            rec.phase("charpoly", || match method {
                Method::Whitney => charpoly::whitney_charpoly_with_limit(&da, limits.max_subsets as u128),
                _ => charpoly::poset_charpoly_with_limit(&da, limits.max_subsets as usize),
            })?
        }
    };
    Ok(p)
}

fn method_name(method: Method) -> &'static str {
    match method {
        Method::Whitney => "whitney",
        Method::Poset => "poset",
        Method::Combinatorial => "combinatorial",
    }
}

fn coefficient_rows(p: &CharPolynomial) -> Table {
    let mut table = Table::new(&["power", "coefficient"]);
    let d = p.degree();
    for (k, c) in p.coefficients().iter().enumerate() {
        table.push(vec![(d - k).to_string(), c.to_string()]);
    }
    table
}

pub fn charpoly(rec: &mut Recorder, limits: &Limits, ns_path: &Path, method: Method) -> Result<Outcome> {
    let ns = load_ns(rec, ns_path)?;
    let p = polynomial(rec, limits, &ns, method)?;
    Ok(Outcome {
        payload: json!({
            "n": ns.n(), "m": ns.m(),
            "method": method_name(method),
            "coefficients": p,
            "polynomial": p.to_string(),
            "factored": p.factored(),
        }),
        text: format!("χ(x) = {}\n     = {}\n", p, p.factored()),
        table: coefficient_rows(&p),
        failed: None,
    })
}

pub fn count(rec: &mut Recorder, limits: &Limits, ns_path: &Path, method: Method) -> Result<Outcome> {
    let ns = load_ns(rec, ns_path)?;
    let p = polynomial(rec, limits, &ns, method)?;
    let cones = charpoly::zaslavsky_regions(&p);
    let classes = charpoly::iso_class_count(&p)?;
    let mut table = Table::new(&["n", "m", "cones", "classes"]);
    table.push(vec![ns.n().to_string(), ns.m().to_string(), cones.to_string(), classes.to_string()]);
    Ok(Outcome {
        payload: json!({
            "n": ns.n(), "m": ns.m(),
            "method": method_name(method),
            "coefficients": p,
            "polynomial": p.to_string(),
            "cones": big(&cones),
            "classes": big(&classes),
        }),
        text: format!("χ(x) = {p}\ncones: {cones}\nclasses: {classes}\n"),
        table,
        failed: None,
    })
}

fn catalog_for(rec: &mut Recorder, limits: &Limits, da: &DiscriminantalArrangement) -> Result<ChamberCatalog> {
    Ok(rec.phase("chambers", || chambers::enumerate_chambers_with_limit(da, limits.max_chambers))?)
}

pub fn chambers(rec: &mut Recorder, limits: &Limits, ns_path: &Path, out: Option<PathBuf>) -> Result<Outcome> {
    let ns = load_ns(rec, ns_path)?;
    let da = rec.phase("build", || DiscriminantalArrangement::build(&ns));
    let catalog = catalog_for(rec, limits, &da)?;
    rec.phase("pairing", || chambers::antipodal_classes(&catalog))?;
    if let Some(path) = &out {
        write_json(path, &catalog)?;
    }
    let mut table = Table::new(&["index", "signs", "class", "witness"]);
    let mut text = format!("{} chambers, {} classes\n", catalog.len(), catalog.class_count());
    for (i, c) in catalog.chambers.iter().enumerate() {
        let witness = rationals(&c.witness).join(" ");
        text += &format!("  {:>5}  {}  class {:>4}  b = ({witness})\n", i, c.signs, c.class);
        table.push(vec![i.to_string(), c.signs.to_string(), c.class.to_string(), witness]);
    }
    let mut payload = json!({
        "n": catalog.n, "m": catalog.m,
        "chambers": catalog.len(),
        "classes": catalog.class_count(),
        "out": out_path(&out),
    });
    if out.is_none() {
        payload["catalog"] = serde_json::to_value(&catalog)?;
    }
    Ok(Outcome { payload, text, table, failed: None })
}

pub fn classify(
    rec: &mut Recorder,
    limits: &Limits,
    ns_path: &Path,
    b: Vec<Rational>,
    catalog_path: Option<PathBuf>,
) -> Result<Outcome> {
    let ns = load_ns(rec, ns_path)?;
    record_b(rec, "b", &b);
    let da = rec.phase("build", || DiscriminantalArrangement::build(&ns));
    let catalog = match &catalog_path {
        Some(path) => {
            let bytes = read_input(rec, "catalog", path)?;
            let catalog: ChamberCatalog = serde_json::from_slice(&bytes)
                .with_context(|| format!("parsing catalog {}", path.display()))?;
            if (catalog.n, catalog.m) != (ns.n(), ns.m()) {
                bail!(
                    "catalog is for n={} m={}, normal system has n={} m={}",
                    catalog.n,
                    catalog.m,
                    ns.n(),
                    ns.m()
                );
            }
            catalog
        }
        None => catalog_for(rec, limits, &da)?,
    };
    let verdict = rec.phase("classify", || chambers::classify_b(&da, &catalog, &b))?;
    let b_text = rationals(&b).join(",");
    let mut table = Table::new(&["b", "kind", "class", "signs", "walls"]);
    let text = match &verdict {
        Classification::Chamber { class, signs } => {
            table.push(vec![b_text.clone(), "chamber".into(), class.to_string(), signs.to_string(), String::new()]);
            format!("b = ({b_text}) lies in chamber {signs}, class {class}\n")
        }
        Classification::OnWall { subsets } => {
            let walls: Vec<String> = subsets.iter().map(|s| format!("{{{}}}", label(s))).collect();
            table.push(vec![b_text.clone(), "on_wall".into(), String::new(), String::new(), walls.join(" ")]);
            format!("b = ({b_text}) is not generic; it lies on {}\n", walls.join(", "))
        }
    };
    let mut payload = serde_json::to_value(&verdict)?;
    payload["b"] = json!(rationals(&b));
    Ok(Outcome { payload, text, table, failed: None })
}

pub fn check_cf(rec: &mut Recorder, ns_path: &Path, witness: bool) -> Result<Outcome> {
    let ns = load_ns(rec, ns_path)?;
    let da = rec.phase("build", || DiscriminantalArrangement::build(&ns));
    let verdict = rec.phase("check", || concurrency::check_concurrency_free(&da))?;
    let mut table = Table::new(&["free", "collection", "matrix_rank", "combinatorial_rank", "forced"]);
    let (payload, text) = match &verdict {
        ConcurrencyVerdict::Free => {
            table.push(vec!["true".into(), String::new(), String::new(), String::new(), String::new()]);
            (json!({ "free": true }), "concurrency free\n".to_string())
        }
        ConcurrencyVerdict::NotFree(w) => {
            table.push(vec![
                "false".into(),
                w.collection.to_string(),
                w.matrix_rank.to_string(),
                w.combinatorial_rank.to_string(),
                w.forced.to_string(),
            ]);
            let mut payload = json!({ "free": false });
            let mut text = "not concurrency free\n".to_string();
            if witness {
                payload["witness"] = json!({
                    "collection": w.collection,
                    "matrix_rank": w.matrix_rank,
                    "combinatorial_rank": w.combinatorial_rank,
                    "forced": w.forced,
                });
                text += &format!(
                    "  witness {}: matrix rank {}, combinatorial rank {}, forces {}\n",
                    w.collection, w.matrix_rank, w.combinatorial_rank, w.forced
                );
            }
            (payload, text)
        }
    };
    Ok(Outcome { payload, text, table, failed: None })
}

pub fn closure(rec: &mut Recorder, path: &Path) -> Result<Outcome> {
    let bytes = read_input(rec, "collection", path)?;
    let d: SubsetCollection =
        serde_json::from_slice(&bytes).with_context(|| format!("parsing collection {}", path.display()))?;
    let c = rec.phase("closure", || concurrency::concurrency_closure(&d));
    let base = concurrency::base_collection(&c)?;
    let sets = concurrency::concurrency_orders(&c)?;
    let rank = concurrency::combinatorial_rank(&c);
    let mut table = Table::new(&["members", "order"]);
    for s in &sets {
        table.push(vec![label(&s.members), s.order.to_string()]);
    }
    let mut text = format!(
        "closure of {d}\n  = {c}\n  closed input: {}\n  combinatorial rank: {rank}\n  base: {base}\n",
        d == c
    );
    for s in &sets {
        text += &format!("  concurrent {{{}}} of order {}\n", label(&s.members), s.order);
    }
    Ok(Outcome {
        payload: json!({
            "input": d,
            "closed": d == c,
            "closure": c,
            "combinatorial_rank": rank,
            "base": base,
            "concurrency_sets": sets,
        }),
        text,
        table,
        failed: None,
    })
}

pub fn regions(rec: &mut Recorder, ns_path: &Path, b: Vec<Rational>) -> Result<Outcome> {
    let ns = load_ns(rec, ns_path)?;
    record_b(rec, "b", &b);
    let arr = arrangement(&ns, b)?;
    let regions = rec.phase("regions", || affine::regions(&arr))?;
    let bounded = regions.iter().filter(|r| r.bounded).count();
    let census = RegionCensus {
        total: regions.len(),
        bounded,
        unbounded: regions.len() - bounded,
    };
    let mut table = Table::new(&["signs", "bounded", "point"]);
    let mut text = format!(
        "{} regions: {} bounded, {} unbounded\n",
        census.total, census.bounded, census.unbounded
    );
    let listed: Vec<Value> = regions
        .iter()
        .map(|r| {
            let signs = SignVector(r.signs.clone()).to_string();
            let point = rationals(&r.point);
            text += &format!("  {signs}  {}  ({})\n", if r.bounded { "bounded  " } else { "unbounded" }, point.join(" "));
            table.push(vec![signs.clone(), r.bounded.to_string(), point.join(" ")]);
            json!({ "signs": signs, "bounded": r.bounded, "point": point })
        })
        .collect();
    Ok(Outcome {
        payload: json!({
            "census": census,
            "generic_census": RegionCensus::generic(ns.n(), ns.m()),
            "regions": listed,
        }),
        text,
        table,
        failed: None,
    })
}

pub fn signature(rec: &mut Recorder, ns_path: &Path, b: Vec<Rational>) -> Result<Outcome> {
    let ns = load_ns(rec, ns_path)?;
    record_b(rec, "b", &b);
    let arr = arrangement(&ns, b)?;
    let triangles = rec.phase("signature", || affine::simplex_signature(&arr))?;
    let special = if ns.n() == 4 { Some(affine::special_point(&arr)?) } else { None };
    let labels: Vec<String> = triangles.iter().map(|t| t.iter().map(|i| i.to_string()).collect()).collect();
    let mut table = Table::new(&["triangle"]);
    for l in &labels {
        table.push(vec![l.clone()]);
    }
    let mut text = format!("{} triangles: {}\n", labels.len(), labels.join(" "));
    if let Some([i, j]) = special {
        text += &format!("special point: {{{i},{j}}}\n");
    }
    Ok(Outcome {
        payload: json!({ "triangles": triangles, "labels": labels, "special_point": special }),
        text,
        table,
        failed: None,
    })
}

pub fn iso(rec: &mut Recorder, ns_path: &Path, b1: Vec<Rational>, b2: Vec<Rational>) -> Result<Outcome> {
    let ns = load_ns(rec, ns_path)?;
    record_b(rec, "b1", &b1);
    record_b(rec, "b2", &b2);
    let (a1, a2) = (arrangement(&ns, b1)?, arrangement(&ns, b2)?);
    let (t1, t2) = rec.phase("orders", || -> Result<_> {
        Ok((affine::vertex_orders(&a1)?, affine::vertex_orders(&a2)?))
    })?;
    let same = affine::orders_match(&t1, &t2);
    let mut table = Table::new(&["line", "orders_1", "orders_2", "relation"]);
    let mut text = format!("{}\n", if same { "isomorphic" } else { "not isomorphic" });
    for (l1, l2) in t1.lines.iter().zip(&t2.lines) {
        let fmt = |v: &[Vec<usize>]| v.iter().map(|s| label(s)).collect::<Vec<_>>().join(" ");
        let relation = if l1.vertices == l2.vertices {
            "same"
        } else if l1.vertices.iter().eq(l2.vertices.iter().rev()) {
            "reversed"
        } else {
            "different"
        };
        text += &format!("  line {{{}}}: {relation}\n", label(&l1.line));
        table.push(vec![label(&l1.line), fmt(&l1.vertices), fmt(&l2.vertices), relation.into()]);
    }
    Ok(Outcome {
        payload: json!({ "isomorphic": same, "orders": [t1, t2] }),
        text,
        table,
        failed: None,
    })
}

pub fn catalog_verify(rec: &mut Recorder, limits: &Limits, ns_path: &Path) -> Result<Outcome> {
    let ns = load_ns(rec, ns_path)?;
    let da = rec.phase("build", || DiscriminantalArrangement::build(&ns));
    let catalog = catalog_for(rec, limits, &da)?;
    let mut checks: Vec<(&str, bool, String)> = Vec::new();

    let witnesses = rec.phase("witnesses", || chambers::verify_catalog(&da, &catalog));
    checks.push(("witnesses", witnesses.is_ok(), witnesses.err().map_or_else(
        || format!("{} witnesses realise their sign vectors", catalog.len()),
        |e| e.to_string(),
    )));

    let pairing = chambers::antipodal_classes(&catalog);
    checks.push(("antipodal pairing", pairing.is_ok(), match &pairing {
        Ok(classes) => format!("{} classes", classes.len()),
        Err(e) => e.to_string(),
    }));

    let p = rec.phase("charpoly", || charpoly::poset_charpoly_with_limit(&da, limits.max_subsets as usize))?;
    let cones = charpoly::zaslavsky_regions(&p);
    checks.push(("cone count", cones == BigInt::from(catalog.len()), format!(
        "catalog {} against |χ(-1)| = {cones}",
        catalog.len()
    )));

    let cross = rec.phase("cross_check", || affine::cross_check(&ns, &catalog))?;
    checks.push(("isomorphism oracle", cross.passed(), format!(
        "{} pairs, {} mismatches",
        cross.pairs,
        cross.mismatches.len()
    )));

    let edges = rec.phase("adjacency", || chambers::adjacency(&da, &catalog));
    let swaps = rec.phase("swaps", || -> Result<usize> {
        let mut failed = 0;
        for e in &edges {
            if !affine::swap_check(&ns, &da, &catalog, e.a, e.b)?.passed {
                failed += 1;
            }
        }
        Ok(failed)
    })?;
    checks.push(("vertex swaps", swaps == 0, format!("{} edges, {swaps} failed", edges.len())));

    let passed = checks.iter().all(|c| c.1);
    let mut table = Table::new(&["check", "result", "detail"]);
    let mut text = String::new();
    for (name, ok, detail) in &checks {
        let verdict = if *ok { "PASS" } else { "FAIL" };
        text += &format!("{verdict}  {name:<20} {detail}\n");
        table.push(vec![name.to_string(), verdict.into(), detail.clone()]);
    }
    let failing: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    Ok(Outcome {
        payload: json!({
            "n": ns.n(), "m": ns.m(),
            "passed": passed,
            "checks": checks
                .iter()
                .map(|(name, ok, detail)| json!({ "check": name, "passed": ok, "detail": detail }))
                .collect::<Vec<_>>(),
        }),
        text,
        table,
        failed: (!passed).then(|| format!("failed checks: {}", failing.join(", "))),
    })
}

pub fn census(
    rec: &mut Recorder,
    limits: &Limits,
    ns_values: Vec<usize>,
    m: usize,
    mode: CensusMode,
    ns_path: Option<PathBuf>,
) -> Result<Outcome> {
    let mut rows: Vec<(usize, usize, &str, CharPolynomial)> = Vec::new();
    match (mode, ns_path) {
        (CensusMode::NsFile, None) => bail!("--mode ns-file needs --ns"),
        (_, Some(path)) => {
            let ns = load_ns(rec, &path)?;
            let p = polynomial(rec, limits, &ns, Method::Poset)?;
            rows.push((ns.n(), ns.m(), "ns-file", p));
        }
        (CensusMode::ConcurrencyFree, None) => {
            for &n in &ns_values {
                let p = rec.phase("charpoly", || charpoly::combinatorial_charpoly(n, m))?;
                rows.push((n, m, "concurrency-free", p));
            }
        }
    }
    let mut table = Table::new(&["n", "m", "mode", "polynomial", "cones", "classes"]);
    let mut text = String::new();
    let mut listed = Vec::new();
    for (n, m, mode, p) in rows {
        let cones = charpoly::zaslavsky_regions(&p);
        let classes = charpoly::iso_class_count(&p)?;
        text += &format!("n={n} m={m} {mode}: χ = {p}, cones {cones}, classes {classes}\n");
        table.push(vec![n.to_string(), m.to_string(), mode.into(), p.to_string(), cones.to_string(), classes.to_string()]);
        listed.push(json!({
            "n": n, "m": m, "mode": mode,
            "coefficients": p,
            "polynomial": p.to_string(),
            "cones": big(&cones),
            "classes": big(&classes),
        }));
    }
    Ok(Outcome {
        payload: json!({ "rows": listed }),
        text,
        table,
        failed: None,
    })
}
