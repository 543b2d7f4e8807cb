use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use groupoid_toric::catalog::{
    encoding_matrix, face_projector_family, left_action, qubit_image_of_action, right_action,
    vertex_projector_family, HamiltonianSpec, Side,
};
use groupoid_toric::commutation::check_corner_commutation;
use groupoid_toric::dense::{
    budget_from_env, commutator_deviation, completeness_deviation, construct_ground_state,
    ground_space_dimension, hamiltonian_trace, measure_syndrome, parse_seed, product_deviation,
    projector_deviation,
};
use groupoid_toric::stabilizer::{biguint_json, log_n};
use groupoid_toric::{
    build_hamiltonian, Corner, Error, FaceId, Groupoid, Lattice, ModelId, OperatorSum, PauliString,
    StabilizerModel,
};

use crate::report::Report;
use crate::{ExciteArgs, Method, ModelArgs, ValidateArgs};

const TOL: f64 = 1e-10;

/// Largest family size for which pairwise orthogonality is enumerated.
const MAX_FAMILY_DIMENSION: u32 = 3;

fn resolve_model(text: &str, n: Option<u32>) -> Result<ModelId> {
    let id = if text.trim() == "zn" {
        ModelId::Zn(n.context("model zn needs --n")?)
    } else {
        text.parse::<ModelId>()?
    };
    if let Some(n) = n {
        if n != id.qudit_dimension() {
            bail!(
                "--n {n} does not match model {id}, which acts on dimension {}",
                id.qudit_dimension()
            );
        }
    }
    Ok(id)
}

fn resolve_groupoid(text: &str) -> Result<Groupoid> {
    let text = text.trim();
    if text == "isotropy-z2" {
        return Ok(Groupoid::isotropy_z2());
    }
    if let Some(n) = text.strip_prefix("sis:") {
        let n: usize = n
            .parse()
            .with_context(|| format!("bad groupoid size in {text:?}"))?;
        return Ok(Groupoid::sis(n)?);
    }
    if let Some(path) = text.strip_prefix("file:") {
        let body = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        return Ok(Groupoid::from_json(&body)?);
    }
    bail!("groupoid must be sis:N, isotropy-z2 or file:PATH, got {text:?}")
}

fn build(model: &str, lattice: &str, n: Option<u32>) -> Result<HamiltonianSpec> {
    let id = resolve_model(model, n)?;
    let lattice: Lattice = lattice.parse()?;
    Ok(build_hamiltonian(id, &lattice)?)
}

fn describe_model(r: &mut Report, h: &HamiltonianSpec) {
    r.field("model", h.model.to_string());
    r.field("lattice", h.lattice.spec_string());
    r.field("n", h.n);
    let counts: serde_json::Map<String, Value> = h
        .term_counts()
        .into_iter()
        .map(|(k, c)| (k.to_string(), json!(c)))
        .collect();
    r.field("terms", Value::Object(counts));
}

pub fn validate(a: &ValidateArgs) -> Result<Report> {
    let mut r = Report::new("validate");
    let budget = budget_from_env();
    let h = a
        .model
        .as_deref()
        .map(|m| build(m, &a.lattice, a.n))
        .transpose()?;
    let dimension = h.as_ref().map(|h| h.n).or(a.n).unwrap_or(2);
    let (g, g_name) = match &a.groupoid {
        Some(spec) => (resolve_groupoid(spec)?, spec.clone()),
        None => (
            Groupoid::sis(dimension as usize)?,
            format!("sis:{dimension}"),
        ),
    };
    if let Some(h) = &h {
        describe_model(&mut r, h);
    }
    r.field("groupoid", g_name);

    let axioms = g.validate();
    let detail = match axioms.violations.first() {
        None => format!("{} morphisms over {} objects", g.len(), g.n_objects()),
        Some(v) => format!("{} violations, first: {v}", axioms.violations.len()),
    };
    r.check("groupoid axioms", axioms.passed(), detail);

    if g.is_sis_type() {
        let e = encoding_matrix(&g)?;
        let mut worst: f64 = 0.0;
        for m in g.morphism_ids() {
            for (side, action) in [
                (Side::Left, left_action(&g, m)),
                (Side::Right, right_action(&g, m)),
            ] {
                let lhs = &e * action * e.transpose();
                let rhs = qubit_image_of_action(&g, m, side)?.to_matrix(budget)?;
                worst = worst.max((lhs - rhs).iter().map(|c| c.norm()).fold(0.0, f64::max));
            }
        }
        r.check(
            "edge encoding intertwines actions",
            worst < 1e-12,
            format!("{} actions, max deviation {worst:.1e}", 2 * g.len()),
        );
    }

    if a.appendix_b {
        for corner in Corner::ALL {
            let rep = check_corner_commutation(&g, corner);
            if corner == Corner::SW {
                let example = rep
                    .violations
                    .first()
                    .map(|v| format!(", e.g. g={} h={}", v.g, v.h))
                    .unwrap_or_default();
                r.check(
                    "corner SW commutation",
                    rep.central_sum_deviation == 0,
                    format!(
                        "identity-sum face projector commutes; {} of {} single-holonomy pairs do not{example}",
                        rep.violations.len(),
                        rep.pairs_checked
                    ),
                );
            } else {
                r.check(
                    format!("corner {corner} commutation"),
                    rep.all_pairs_commute(),
                    format!(
                        "{} pairs, max deviation {}",
                        rep.pairs_checked, rep.max_deviation
                    ),
                );
            }
        }
    }

    if let Some(h) = &h {
        model_checks(&mut r, h, budget)?;
    }
    Ok(r)
}

fn model_checks(r: &mut Report, h: &HamiltonianSpec, budget: u64) -> Result<()> {
    let ops = h.operators();
    let mut worst: f64 = 0.0;
    for op in &ops {
        worst = worst.max(projector_deviation(op, budget)?);
    }
    r.check(
        "terms are projectors",
        worst < TOL,
        format!("{} terms, max |P²-P| {worst:.1e}", ops.len()),
    );

    match StabilizerModel::from_hamiltonian(h) {
        Ok(m) => r.check(
            "stabilizer factors commute",
            true,
            format!("{} factors", m.generators().len()),
        ),
        Err(e) => r.check("stabilizer factors commute", false, e.to_string()),
    }

    let supports: Vec<Vec<usize>> = ops.iter().map(OperatorSum::support).collect();
    let (mut pairs, mut skipped, mut worst) = (0, 0, 0.0f64);
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            if !supports[i].iter().any(|s| supports[j].contains(s)) {
                continue;
            }
            match commutator_deviation(&ops[i], &ops[j], budget) {
                Ok(d) => {
                    pairs += 1;
                    worst = worst.max(d);
                }
                Err(Error::BudgetExceeded { .. }) => skipped += 1,
                Err(e) => return Err(e.into()),
            }
        }
    }
    let skipped_note = if skipped > 0 {
        format!(", {skipped} pairs over the memory budget not checked")
    } else {
        String::new()
    };
    r.check(
        "overlapping terms commute",
        worst < TOL,
        format!("{pairs} pairs, max deviation {worst:.1e}{skipped_note}"),
    );

    let l = &h.lattice;
    if h.n > MAX_FAMILY_DIMENSION {
        r.field(
            "families",
            format!("skipped for n > {MAX_FAMILY_DIMENSION}"),
        );
        return Ok(());
    }
    if let Some(v) = l.vertices().find(|&v| l.vertex_sites(v).len() == 4) {
        let family: Vec<OperatorSum> = vertex_projector_family(l, v, h.n)?
            .into_iter()
            .map(|p| p.operator)
            .collect();
        family_checks(r, &format!("vertex projectors at {v}"), &family, budget)?;
    }
    if l.n_faces() > 0 {
        let f = FaceId { x: 0, y: 0 };
        let family: Vec<OperatorSum> = face_projector_family(l, f, h.n)?.into_values().collect();
        family_checks(r, &format!("face projectors at {f}"), &family, budget)?;
    }
    Ok(())
}

fn family_checks(r: &mut Report, name: &str, family: &[OperatorSum], budget: u64) -> Result<()> {
    let mut idem: f64 = 0.0;
    let mut orth: f64 = 0.0;
    for (i, p) in family.iter().enumerate() {
        idem = idem.max(projector_deviation(p, budget)?);
        for q in &family[i + 1..] {
            orth = orth.max(product_deviation(p, q, budget)?);
        }
    }
    let complete = completeness_deviation(family, budget)?;
    r.check(
        name,
        idem < TOL && orth < TOL && complete < TOL,
        format!(
            "{} projectors; idempotency {idem:.1e}, orthogonality {orth:.1e}, completeness {complete:.1e}",
            family.len()
        ),
    );
    Ok(())
}

pub fn gsd(a: &ModelArgs) -> Result<Report> {
    let h = build(&a.model, &a.lattice, a.n)?;
    let mut r = Report::new("gsd");
    describe_model(&mut r, &h);
    r.field("method", format!("{:?}", a.method).to_lowercase());
    let mut stabilizer_value = None;
    if a.method != Method::Dense {
        let m = StabilizerModel::from_hamiltonian(&h)?;
        let analysis = m.analyze();
        r.field("gsd", biguint_json(&analysis.gsd));
        r.field(
            "k",
            analysis
                .consistent
                .then(|| log_n(&analysis.gsd, h.n))
                .flatten(),
        );
        r.field("rank", analysis.rank);
        r.field("relations", analysis.relations);
        r.field("consistent", analysis.consistent);
        stabilizer_value = Some(analysis.gsd.to_string());
    }
    if a.method != Method::Stabilizer {
        let budget = budget_from_env();
        let trace = hamiltonian_trace(&h, budget)?;
        let eig = ground_space_dimension(&h, budget)?;
        if stabilizer_value.is_none() {
            r.field("gsd", eig);
            r.field("k", log_n(&eig.into(), h.n));
        }
        r.field("dense_trace", trace);
        r.field("dense_gsd", eig);
        r.check(
            "dense trace matches eigensolve",
            (trace - eig as f64).abs() < 1e-6,
            format!("trace {trace:.6}, eigenvalue multiplicity {eig}"),
        );
        if let Some(stab) = &stabilizer_value {
            r.check(
                "stabilizer and dense agree",
                *stab == eig.to_string(),
                format!("{stab} = {eig}"),
            );
        }
    }
    Ok(r)
}

pub fn excite(a: &ExciteArgs) -> Result<Report> {
    let h = build(&a.model.model, &a.model.lattice, a.model.n)?;
    let l = &h.lattice;
    let m = StabilizerModel::from_hamiltonian(&h)?;
    let op = PauliString::parse(&a.op, l, h.n)?;
    let mut r = Report::new("excite");
    describe_model(&mut r, &h);
    r.field("op", op.to_text(l));
    let violated: Vec<usize>;
    if a.model.method != Method::Dense {
        let s = m.syndrome(&op)?;
        violated = s.violated_terms.clone();
        r.field("energy", s.energy);
        r.field("violated", names(&h, &violated));
        r.field("classification", m.classify(&op)?.to_string());
    } else {
        violated = Vec::new();
    }
    if a.model.method != Method::Stabilizer {
        let seed_text = a
            .seed_config
            .as_deref()
            .context("dense excitation needs --seed-config to build a ground state")?;
        let budget = budget_from_env();
        let seed = parse_seed(seed_text, l, h.n)?;
        let ground = construct_ground_state(&h, &seed, budget)?;
        let values = measure_syndrome(&h, &ground.apply_pauli(&op)?)?;
        let dense: Vec<usize> = (0..values.len()).filter(|&i| values[i] < 0.5).collect();
        r.field("dense_energy", dense.len());
        if a.model.method == Method::Dense {
            r.field("violated", names(&h, &dense));
        } else {
            r.check(
                "stabilizer and dense syndromes agree",
                dense == violated,
                format!("{} = {} violated terms", violated.len(), dense.len()),
            );
        }
    }
    Ok(r)
}

fn names(h: &HamiltonianSpec, terms: &[usize]) -> Vec<String> {
    terms
        .iter()
        .map(|&t| h.terms[t].location.to_string())
        .collect()
}
