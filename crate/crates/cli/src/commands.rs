use anyhow::{anyhow, bail, Context, Result};
use hvoa::conformal::{central_charge, classify_moduli, fock_central_charge, is_automorphism};
use hvoa::fock::virasoro_mode;
use hvoa::json::{
    fock_from_json, fock_to_json, label_to_json, matrix_from_json, matrix_to_json,
    moduli_to_json, pair_from_json, pair_to_json, quadlin_from_json, raw_pair_from_json, regpair_to_json,
    vector_from_json, vector_to_json, JsonField,
};
use hvoa::linalg::Matrix;
use hvoa::orbits::{classify, witness, witness_auto, witness_residual, OrbitError, Witness};
use hvoa::poset::{validate_pairs, HasseGraph};
use hvoa::scalars::{Approx, Gaussian, Tolerance};
use hvoa::semiconformal::{
    commutant_weight1, complement, fock_commutant_weight1, fock_semiconformal_check, is_semiconformal,
    maximal_chain, to_subspace, ScPair,
};
use serde_json::{json, Value};

use crate::{Command, Ctx};

pub enum Output {
    Json(Value),
    Text(String),
}

/// Backend-specific witness construction.
pub trait CliField: JsonField {
    fn witness_json(p1: &ScPair<Self>, p2: &ScPair<Self>, tol: Tolerance) -> Result<Value, OrbitError>;
}

impl CliField for Gaussian {
    fn witness_json(p1: &ScPair<Self>, p2: &ScPair<Self>, tol: Tolerance) -> Result<Value, OrbitError> {
        Ok(match witness_auto(p1, p2, tol)? {
            Witness::Exact(q) => json!({
                "backend": "exact",
                "Q": matrix_to_json(q.matrix()),
                "residual": witness_residual(q.matrix(), p1, p2),
            }),
            Witness::Approx(q) => json!({
                "backend": "approx",
                "Q": matrix_to_json(q.matrix()),
                "residual": witness_residual(q.matrix(), &p1.to_approx(), &p2.to_approx()),
            }),
        })
    }
}

impl CliField for Approx {
    fn witness_json(p1: &ScPair<Self>, p2: &ScPair<Self>, tol: Tolerance) -> Result<Value, OrbitError> {
        let q = witness(p1, p2, tol)?;
        Ok(json!({
            "backend": "approx",
            "Q": matrix_to_json(q.matrix()),
            "residual": witness_residual(q.matrix(), p1, p2),
        }))
    }
}

fn get<'a>(doc: &'a Value, name: &str) -> Result<&'a Value> {
    doc.get(name).with_context(|| format!("input is missing {name:?}"))
}

pub fn dispatch<F: CliField>(cmd: &Command, doc: &Value, ctx: &Ctx) -> Result<Output> {
    let tol = ctx.tol;
    let out = match cmd {
        Command::Check { fock, .. } => {
            let (a, b, h) = raw_pair_from_json::<F>(doc)?;
            let ok = is_semiconformal(&a, &b, &h, tol)?;
            let mut v = json!({"semiconformal": ok});
            if ok {
                let p = ScPair::new(a.clone(), b.clone(), h.clone(), tol)?;
                v["rank"] = json!(p.rank(tol));
                v["central_charge"] = p.central_charge().to_json();
            }
            if let Some(n) = fock {
                v["fock"] = json!(fock_semiconformal_check(&a, &b, &h, *n, tol)?);
            }
            v
        }
        Command::Classify { .. } => {
            let p = pair_from_json::<F>(doc, tol)?;
            label_to_json(&classify(&p, tol)?)
        }
        Command::Commutant { .. } => {
            let p = pair_from_json::<F>(doc, tol)?;
            let ker = commutant_weight1(&p, tol);
            let fock = fock_commutant_weight1(&p, tol);
            json!({
                "dim": ker.dim(),
                "basis": ker.basis_vectors().iter().map(vector_to_json).collect::<Vec<_>>(),
                "fock_agrees": ker.same_as(&fock, tol),
            })
        }
        Command::Complement { .. } => pair_to_json(&complement(&pair_from_json::<F>(doc, tol)?)),
        Command::Chain => {
            let h = ctx.require_shift::<F>()?;
            if h.dim() == 0 {
                bail!("dimension must be at least 1");
            }
            Value::Array(maximal_chain(&h).iter().map(pair_to_json).collect())
        }
        Command::Poset { dot, .. } => {
            let items = doc
                .as_array()
                .or_else(|| doc.get("pairs").and_then(Value::as_array))
                .context("poset input must be an array of pairs or {\"pairs\": [...]}")?;
            let raw = items
                .iter()
                .enumerate()
                .map(|(i, v)| raw_pair_from_json::<F>(v).with_context(|| format!("pair {i}")))
                .collect::<Result<Vec<_>>>()?;
            let pairs = validate_pairs(raw, tol)?;
            let graph = HasseGraph::build(&pairs, tol)?;
            if *dot {
                return Ok(Output::Text(graph.to_dot()));
            }
            json!({
                "nodes": graph.nodes().iter().zip(graph.ranks()).map(|(p, k)| {
                    json!({"rank": k, "pair": pair_to_json(p), "subspace": regpair_to_json(&to_subspace(p, tol))})
                }).collect::<Vec<_>>(),
                "edges": graph.edges().iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
            })
        }
        Command::Charge { .. } => {
            let w = if doc.is_null() {
                hvoa::fock::QuadLin::omega(&ctx.require_shift::<F>()?)
            } else {
                quadlin_from_json::<F>(doc, tol)?
            };
            let c = central_charge(&w, tol)?;
            json!({"central_charge": c.to_json(), "fock": fock_central_charge(&w).to_json()})
        }
        Command::Moduli => moduli_to_json(&classify_moduli(&ctx.require_shift::<F>()?, tol)),
        Command::AutCheck { .. } => {
            let q: Matrix<F> = matrix_from_json(get(doc, "Q")?)?;
            let h = match doc.get("h") {
                Some(h) => vector_from_json(h)?,
                None => ctx.require_shift()?,
            };
            json!({"automorphism": is_automorphism(&q, &h, tol)})
        }
        Command::FockApply { .. } => {
            let w = quadlin_from_json::<F>(get(doc, "W")?, tol)?;
            let m = get(doc, "m")?.as_i64().context("m must be an integer")?;
            let v = fock_from_json::<F>(get(doc, "v")?, w.dim())?;
            fock_to_json(&virasoro_mode(&w, m, &v))
        }
        Command::Witness { .. } => {
            let p1 = pair_from_json::<F>(get(doc, "p1")?, tol)?;
            let p2 = pair_from_json::<F>(get(doc, "p2")?, tol)?;
            F::witness_json(&p1, &p2, tol)?
        }
        Command::Verify { .. } => return Err(anyhow!("verify is handled before dispatch")),
    };
    Ok(Output::Json(out))
}
