use std::path::Path;

use hochschild::algebra::TruncatedPolyAlgebra;
use hochschild::bvalgebra::{
    crosscheck_against_barcomplex, delta_closed_form, gerstenhaber_bracket, main_theorem_algebra,
    menichi_loop_s2_over, verify_bv_identities, PresentedBVAlgebra,
};
use hochschild::cyclic::{
    expected_hc_minus_dimension, hc_minus_table, scan_lie_bracket, MixedComplex,
};
use hochschild::isocheck::{bv_isomorphism_exists, SearchSpace, Verdict};
use hochschild::resolution::{verify_chain_map, PeriodicComplex, PeriodicHomology};
use hochschild::{Error, RingSpec};
use serde_json::json;

use crate::report::{
    element_json, module_json, monomial_json, poly_tex, ring_tex, Cell, Report, Table,
};

pub type JobResult = std::result::Result<Report, String>;

fn algebra(
    ring: RingSpec,
    n: usize,
    m: usize,
) -> std::result::Result<TruncatedPolyAlgebra, String> {
    TruncatedPolyAlgebra::new(ring, n, m).map_err(|e| e.to_string())
}

fn presented(
    ring: RingSpec,
    n: usize,
    m: usize,
) -> std::result::Result<PresentedBVAlgebra, String> {
    main_theorem_algebra(ring, n, m).map_err(|e| e.to_string())
}

fn presentation_cell(a: &PresentedBVAlgebra) -> Cell {
    let gens: Vec<&str> = a.generators.iter().map(|g| g.name.as_str()).collect();
    let rels = a.relations();
    let plain = format!("{}[{}]/({})", a.ring, gens.join(","), rels.join(", "));
    let tex_rels: Vec<String> = rels.iter().map(|r| poly_tex(r)).collect();
    let tex = format!(
        "{}[{}]/({})",
        ring_tex(a.ring),
        gens.join(","),
        tex_rels.join(", ")
    );
    Cell::math(plain, tex)
}

fn generator_table(a: &PresentedBVAlgebra) -> Table {
    Table {
        caption: format!("generators of {}", a.name),
        header: vec!["generator".into(), "degree".into()],
        rows: a
            .generators
            .iter()
            .map(|g| {
                vec![
                    Cell::math(g.name.clone(), g.name.clone()),
                    Cell::int(g.degree),
                ]
            })
            .collect(),
    }
}

pub fn hh(ring: RingSpec, n: usize, m: usize, levels: usize) -> JobResult {
    let a = algebra(ring, n, m)?;
    let p = PeriodicComplex::new(&a);
    let hom = PeriodicHomology::compute(&a, levels - 1);
    let mut report = Report::new("hh", ring, json!({"n": n, "m": m, "levels": levels}));
    let mut rows = Vec::new();
    for (level, module) in hom.modules().iter().enumerate() {
        let mut parts = Vec::new();
        let mut comps = Vec::new();
        for k in 0..=n {
            let w = p.weight(level, k);
            let c = p.component(level, w);
            if c.is_zero() {
                continue;
            }
            let d = p.internal_degree(level, k);
            comps.push(json!({"degree": d, "weight": w, "module": module_json(&c)}));
            parts.push((d, c));
        }
        report
            .results
            .push(json!({"level": level, "module": module_json(module), "components": comps}));
        let plain: Vec<String> = parts.iter().map(|(d, c)| format!("{d}: {c}")).collect();
        let tex: Vec<String> = parts
            .iter()
            .map(|(d, c)| format!("{d}\\colon {}", crate::report::module_tex(c)))
            .collect();
        rows.push(vec![
            Cell::int(level),
            Cell::module(module),
            Cell::math(plain.join(", "), tex.join(",\\ ")),
        ]);
    }
    report.tables.push(Table {
        caption: format!("HH^*({a}) by level"),
        header: vec!["level".into(), "HH".into(), "by internal degree".into()],
        rows,
    });
    Ok(report)
}

pub fn bv(ring: RingSpec, n: usize, m: usize, t_cap: u32) -> JobResult {
    let a = presented(ring, n, m)?;
    let mut report = Report::new("bv", ring, json!({"n": n, "m": m, "t_cap": t_cap}));
    report.extra.insert(
        "presentation".into(),
        serde_json::to_value(a.presentation()).expect("presentations serialize"),
    );
    report.preamble.push(presentation_cell(&a));
    report.tables.push(generator_table(&a));
    let mut rows = Vec::new();
    for e in a.normal_monomials(t_cap) {
        let d = delta_closed_form(&a.monomial(e));
        report
            .results
            .push(json!({"monomial": monomial_json(&a, &e), "delta": element_json(&d)}));
        rows.push(vec![
            Cell::element(&a.monomial(e)),
            Cell::int(a.monomial_degree(&e)),
            Cell::element(&d),
        ]);
    }
    report.tables.push(Table {
        caption: "BV operator on the monomial basis".into(),
        header: vec!["monomial".into(), "degree".into(), "Δ".into()],
        rows,
    });
    Ok(report)
}

pub fn bracket(ring: RingSpec, n: usize, m: usize, t_cap: u32) -> JobResult {
    let a = presented(ring, n, m)?;
    let monos = a.normal_monomials(t_cap);
    let mut report = Report::new("bracket", ring, json!({"n": n, "m": m, "t_cap": t_cap}));
    report.preamble.push(presentation_cell(&a));
    let mut rows = Vec::new();
    let mut zero = 0;
    for (i, e) in monos.iter().enumerate() {
        for f in &monos[i..] {
            let (x, y) = (a.monomial(*e), a.monomial(*f));
            let b = gerstenhaber_bracket(&x, &y).map_err(|e| e.to_string())?;
            if b.is_zero() {
                zero += 1;
                continue;
            }
            report.results.push(json!({
                "left": monomial_json(&a, e),
                "right": monomial_json(&a, f),
                "bracket": element_json(&b),
            }));
            rows.push(vec![
                Cell::element(&x),
                Cell::element(&y),
                Cell::element(&b),
            ]);
        }
    }
    report.tables.push(Table {
        caption: "nonzero Gerstenhaber brackets of basis monomials".into(),
        header: vec!["a".into(), "b".into(), "{a,b}".into()],
        rows,
    });
    report
        .summary
        .push(format!("{zero} further pairs have vanishing bracket"));
    Ok(report)
}

pub fn cyclic(ring: RingSpec, n: usize, m: usize, min: i64, max: i64, window: usize) -> JobResult {
    if !ring.is_field() {
        return Err(
            Error::UnsupportedRing(ring).to_string() + "; negative cyclic cohomology needs a field"
        );
    }
    let mc = MixedComplex::new(&algebra(ring, n, m)?);
    let table = hc_minus_table(&mc, min..=max, window).map_err(|e| e.to_string())?;
    let scan = scan_lie_bracket(&mc, min..=max, window).map_err(|e| e.to_string())?;
    let mut report = Report::new(
        "cyclic",
        ring,
        json!({"n": n, "m": m, "min_degree": min, "max_degree": max, "window": window}),
    );
    let mut rows = Vec::new();
    for (d, dim) in &table {
        let expected =
            (ring.characteristic() == 0 && m == 1).then(|| expected_hc_minus_dimension(n, *d));
        report
            .results
            .push(json!({"degree": d, "dimension": dim, "expected": expected}));
        rows.push(vec![
            Cell::int(d),
            Cell::int(dim),
            expected.map_or_else(|| Cell::text("-"), Cell::int),
        ]);
    }
    report.tables.push(Table {
        caption: format!("HC_- dimensions, window {window}"),
        header: vec!["degree".into(), "dim".into(), "expected".into()],
        rows,
    });
    let witnesses: Vec<_> = scan
        .nonzero
        .iter()
        .map(|w| json!({"degrees": [w.degrees.0, w.degrees.1], "indices": [w.indices.0, w.indices.1], "value": w.value}))
        .collect();
    report.extra.insert(
        "bracket".into(),
        json!({"pairs": scan.pairs, "vanishes": scan.nonzero.is_empty(), "nonzero": witnesses}),
    );
    if scan.nonzero.is_empty() {
        report.summary.push(format!(
            "Lie bracket vanishes on all {} basis pairs",
            scan.pairs
        ));
    } else {
        report.summary.push(format!(
            "Lie bracket is nonzero on {} of {} basis pairs",
            scan.nonzero.len(),
            scan.pairs
        ));
        for w in &scan.nonzero {
            report.summary.push(format!(
                "  degrees {:?}, basis indices {:?}: {}",
                w.degrees, w.indices, w.value
            ));
        }
    }
    Ok(report)
}

pub fn verify(ring: RingSpec, n: usize, m: usize, word_length: usize, t_cap: u32) -> JobResult {
    let a = algebra(ring, n, m)?;
    let bv = presented(ring, n, m)?;
    let chain = verify_chain_map(&a, word_length, None);
    let ids = verify_bv_identities(&bv, t_cap);
    let k_cap = (word_length.saturating_sub(1) / 2) as u32;
    let cross = crosscheck_against_barcomplex(n, m, ring, k_cap).map_err(|e| e.to_string())?;
    let mut report = Report::new(
        "verify",
        ring,
        json!({"n": n, "m": m, "word_length": word_length, "t_cap": t_cap}),
    );
    let chain_v: Vec<String> = chain.violations.iter().map(|v| v.to_string()).collect();
    let id_v: Vec<String> = ids
        .violations
        .iter()
        .map(|v| format!("{:?} at {:?}: {}", v.identity, v.witness, v.residual))
        .collect();
    let cross_v: Vec<String> = cross
        .entries
        .iter()
        .filter(|e| !e.agrees)
        .map(|e| {
            format!(
                "{}: {}",
                e.label,
                e.detail.as_deref().unwrap_or("disagrees")
            )
        })
        .collect();
    let suites = [
        ("chain_map", chain.checked, chain_v),
        ("bv_identities", ids.triples, id_v),
        ("crosscheck", cross.entries.len(), cross_v),
    ];
    let mut rows = Vec::new();
    for (name, checked, violations) in suites {
        report.failed |= !violations.is_empty();
        rows.push(vec![
            Cell::text(name),
            Cell::int(checked),
            Cell::int(violations.len()),
            Cell::text(if violations.is_empty() {
                "PASS"
            } else {
                "FAIL"
            }),
        ]);
        for v in &violations {
            report.summary.push(format!("{name}: {v}"));
        }
        report
            .results
            .push(json!({"suite": name, "checked": checked, "violations": violations}));
    }
    report.tables.push(Table {
        caption: format!("verification of {}", bv.name),
        header: vec![
            "suite".into(),
            "checked".into(),
            "violations".into(),
            "status".into(),
        ],
        rows,
    });
    report.summary.push(if report.failed {
        "FAIL".into()
    } else {
        "all suites pass".into()
    });
    Ok(report)
}

/// `hh:R:n:m`, `menichi-ls2[:R]`, or a path to a presentation in JSON.
pub fn parse_presentation(spec: &str) -> std::result::Result<PresentedBVAlgebra, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let ring = |s: &str| s.parse::<RingSpec>().map_err(|e| e.to_string());
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| format!("`{s}` is not a positive integer in `{spec}`"))
    };
    match parts.as_slice() {
        ["hh", r, n, m] => presented(ring(r)?, num(n)?, num(m)?),
        ["menichi-ls2"] => Ok(menichi_loop_s2_over(RingSpec::Integers)),
        ["menichi-ls2", r] => Ok(menichi_loop_s2_over(ring(r)?)),
        _ if Path::new(spec).is_file() => {
            let s = std::fs::read_to_string(spec).map_err(|e| format!("{spec}: {e}"))?;
            PresentedBVAlgebra::from_json(&s).map_err(|e| format!("{spec}: {e}"))
        }
        _ => Err(format!("cannot read presentation `{spec}`")),
    }
}

pub fn iso(left: &str, right: &str, degree: i64, coefficients: i64) -> JobResult {
    let (a, b) = (parse_presentation(left)?, parse_presentation(right)?);
    let bounds = SearchSpace::new(degree, coefficients).map_err(|e| e.to_string())?;
    let verdict = bv_isomorphism_exists(&a, &b, bounds);
    let mut report = Report::new(
        "iso",
        a.ring,
        json!({"left": left, "right": right, "degree": degree, "coefficient_bound": coefficients}),
    );
    report.preamble.push(presentation_cell(&a));
    report.preamble.push(presentation_cell(&b));
    match &verdict {
        Verdict::Yes { map, .. } => {
            report.extra.insert("verdict".into(), json!("YES"));
            report
                .results
                .push(json!({"map": map.to_string(), "bv_map": true}));
            report
                .summary
                .push(format!("YES: {map} is a BV isomorphism"));
        }
        Verdict::No { refuted, .. } => {
            report.extra.insert("verdict".into(), json!("NO"));
            let mut rows = Vec::new();
            for (map, check) in refuted {
                let witness: Vec<_> = check
                    .witness
                    .iter()
                    .flatten()
                    .map(|e| monomial_json(&a, e))
                    .collect();
                let witness_plain: Vec<String> = check
                    .witness
                    .iter()
                    .flatten()
                    .map(|e| a.format_monomial(e))
                    .collect();
                report.results.push(json!({
                    "map": map.to_string(),
                    "bv_map": false,
                    "witness": witness,
                    "detail": check.detail,
                }));
                rows.push(vec![
                    Cell::text(map.to_string()),
                    Cell::text(witness_plain.join(", ")),
                    Cell::text(check.detail.clone().unwrap_or_default()),
                ]);
            }
            report.tables.push(Table {
                caption: "graded algebra isomorphisms and the inputs on which Δ fails".into(),
                header: vec!["map".into(), "witness".into(), "detail".into()],
                rows,
            });
            report.summary.push(format!(
                "NO: none of the {} algebra isomorphisms within {bounds} commutes with Δ",
                refuted.len()
            ));
        }
    }
    Ok(report)
}
