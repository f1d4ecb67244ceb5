//! One function per subcommand. Input problems come back as `Err` and map
//! to exit code 2; mathematical failures are reported with `pass: false`.

use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use labstrings::completion::homology::{nerve_homology, nerve_q_homology, BarCategory, TotalMonoid};
use labstrings::completion::{grothendieck_group, pi0_presentation, smith_normal_form};
use labstrings::config::{config_from_json, g_act, is_fixed, LabeledConfig};
use labstrings::group_rep::{regular_rep, FiniteGroup, UniverseStage};
use labstrings::io::{group_from_json, int_matrix_from_json, read_json};
use labstrings::monoid::check::{check_axioms, equivariance_check, AxiomConfig};
use labstrings::monoid::{monoid_from_json, Elem, Monoid};
use labstrings::rational::{from_json, parse_q, QVec};
use labstrings::strings::path::PathContext;
use labstrings::strings::{certify_continuity, grouplike_certificate, string_config_from_json, PathSpec};
use num::BigInt;
use serde_json::{json, Value};

use crate::manifest::{Outcome, RunManifest};

fn load_monoid(path: &Path) -> Result<(Value, Monoid)> {
    let v = read_json(path)?;
    let m = monoid_from_json(&v).with_context(|| format!("monoid definition in {}", path.display()))?;
    Ok((v, m))
}

fn stage_of(v: &Value, group: Option<Arc<FiniteGroup>>) -> Result<Arc<UniverseStage>> {
    let group = match (group, v.get("group")) {
        (Some(g), _) => g,
        (None, Some(g)) => group_from_json(g)?,
        (None, None) => Arc::new(FiniteGroup::trivial()),
    };
    let copies = v.get("copies").and_then(Value::as_u64).unwrap_or(1) as usize;
    if copies == 0 {
        bail!("a stage needs at least one copy of the regular representation");
    }
    Ok(Arc::new(regular_rep(group, copies)))
}

fn label_monoid(v: &Value) -> Result<Monoid> {
    let def = v.get("monoid").ok_or_else(|| anyhow!("configuration file needs a \"monoid\""))?;
    Ok(monoid_from_json(def)?)
}

fn big_strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn matrix_json(m: &[Vec<BigInt>]) -> Value {
    json!(m.iter().map(|r| big_strings(r)).collect::<Vec<_>>())
}

pub fn axioms(path: &Path, cfg: AxiomConfig) -> Result<Outcome> {
    let (_, m) = load_monoid(path)?;
    let manifest = RunManifest::new("axioms", &[path])
        .param("arity", cfg.max_arity)
        .param("budget", cfg.budget)
        .param("samples", cfg.samples)
        .param("seed", cfg.seed);
    let laws = check_axioms(m.as_ref(), &cfg);
    let action = equivariance_check(m.as_ref(), &cfg);
    Ok(Outcome {
        manifest,
        pass: laws.pass && action.pass,
        result: json!({"axioms": laws, "equivariance": action}),
    })
}

pub fn completion(path: &Path, arity: usize) -> Result<Outcome> {
    let (_, m) = load_monoid(path)?;
    let manifest = RunManifest::new("completion", &[path]).param("arity", arity);
    let pres = pi0_presentation(m.as_ref(), arity)?;
    let k = grothendieck_group(&pres);
    let next = grothendieck_group(&pi0_presentation(m.as_ref(), arity + 1)?);
    let images: Vec<Value> = pres
        .generators
        .iter()
        .zip(&k.images)
        .map(|(g, img)| json!({"generator": m.render_elem(g), "image": big_strings(img)}))
        .collect();
    Ok(Outcome {
        manifest,
        pass: true,
        result: json!({
            "presentation": pres.to_json(m.as_ref()),
            "group": k.group,
            "group_name": k.group.to_string(),
            "generator_images": images,
            "stability": {
                "arity": arity + 1,
                "group": next.group,
                "stable": next.group == k.group,
            },
        }),
    })
}

/// Which member of the path catalog `homotopy` runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PathKind {
    GammaLambda,
    LambdaGamma,
    Ht,
    Vanish,
    Inverse,
    Isotopy,
}

fn isotopy_from_json(v: &Value, m: Monoid, stage: Arc<UniverseStage>) -> Result<PathSpec> {
    let moves = v
        .get("moves")
        .and_then(Value::as_array)
        .ok_or_else(|| anyhow!("isotopy file needs \"moves\""))?
        .iter()
        .map(|mv| {
            let point = |key: &str| -> Result<QVec> {
                mv.get(key)
                    .and_then(Value::as_array)
                    .ok_or_else(|| anyhow!("move needs \"{key}\""))?
                    .iter()
                    .map(|x| Ok(from_json(x)?))
                    .collect()
            };
            let (from, to) = (point("from")?, point("to")?);
            if from.len() != stage.dim() || to.len() != stage.dim() {
                bail!("move endpoints must have dimension {}", stage.dim());
            }
            let label: Elem = m.parse_elem(mv.get("label").ok_or_else(|| anyhow!("move needs \"label\""))?)?;
            Ok((from, to, label))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PathSpec::LinearIsotopy {
        labels: m,
        stage,
        moves,
        merge_at_end: v.get("merge_at_end").and_then(Value::as_bool).unwrap_or(false),
    })
}

pub fn homotopy(path: &Path, kind: PathKind, samples: usize, lipschitz: Option<&str>) -> Result<Outcome> {
    if samples < 2 {
        bail!("at least two samples are needed");
    }
    let v = read_json(path)?;
    let m = label_monoid(&v)?;
    let stage = stage_of(&v, None)?;
    let bound = lipschitz.map(parse_q).transpose()?;
    let command = if kind == PathKind::Inverse { "certify-inverse" } else { "homotopy" };
    let manifest = RunManifest::new(command, &[path])
        .param("path", format!("{kind:?}"))
        .param("samples", samples)
        .param("lipschitz", lipschitz);
    let spec = if kind == PathKind::Isotopy {
        isotopy_from_json(&v, m, stage)?
    } else {
        let ctx = PathContext::new(m, stage.clone())?;
        let sc = string_config_from_json(&v, stage, &ctx.sm)?;
        match kind {
            PathKind::GammaLambda => PathSpec::GammaLambda { ctx, sc },
            PathKind::LambdaGamma => {
                let x = labstrings::strings::corpus::underlying(&sc, &ctx)?;
                PathSpec::LambdaGamma { ctx, x }
            }
            PathKind::Ht => PathSpec::Ht { ctx, sc },
            PathKind::Vanish => PathSpec::Vanish { ctx, sc },
            PathKind::Inverse => grouplike_certificate(&sc, &ctx)?,
            PathKind::Isotopy => unreachable!(),
        }
    };
    let report = certify_continuity(&spec, samples, bound);
    let mut result = json!({"certificate": report});
    let mut pass = report.pass;
    if kind == PathKind::Inverse {
        let reaches_empty = spec.eval(&num::One::one()).map(|c| c.is_empty()).unwrap_or(false);
        result["ends_empty"] = json!(reaches_empty);
        pass &= reaches_empty;
    }
    Ok(Outcome { manifest, pass, result })
}

pub fn orbit(config: &Path, group_file: &Path, subgroups: &[String]) -> Result<Outcome> {
    let v = read_json(config)?;
    let group = group_from_json(&read_json(group_file)?)?;
    let m = label_monoid(&v)?;
    let stage = stage_of(&v, Some(group.clone()))?;
    let x = config_from_json(&v, stage, m.as_ref())?;
    let manifest = RunManifest::new("orbit", &[config, group_file]).param("subgroups", subgroups);
    let mut orbit: Vec<LabeledConfig> = Vec::new();
    let mut stabilizer = Vec::new();
    for g in 0..group.order() {
        let gx = g_act(&x, g, m.as_ref())?;
        if gx == x {
            stabilizer.push(group.elements()[g].clone());
        }
        if !orbit.contains(&gx) {
            orbit.push(gx);
        }
    }
    let chosen: Vec<Vec<usize>> = if subgroups.is_empty() {
        group.subgroups(64)?.into_iter().map(|h| h.elements().to_vec()).collect()
    } else {
        subgroups
            .iter()
            .map(|s| {
                let elems = s
                    .split(',')
                    .map(|name| group.index_of(name.trim()).ok_or_else(|| anyhow!("no element {name:?} in the group")))
                    .collect::<Result<Vec<_>>>()?;
                Ok(group.subgroup(&elems)?.elements().to_vec())
            })
            .collect::<Result<_>>()?
    };
    let verdicts = chosen
        .iter()
        .map(|h| {
            Ok(json!({
                "subgroup": h.iter().map(|&g| group.elements()[g].clone()).collect::<Vec<_>>(),
                "fixed": is_fixed(&x, h, m.as_ref())?,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome {
        manifest,
        pass: true,
        result: json!({
            "orbit_size": orbit.len(),
            "orbit": orbit.iter().map(|c| c.to_json(m.as_ref())).collect::<Vec<_>>(),
            "stabilizer": stabilizer,
            "verdicts": verdicts,
        }),
    })
}

pub fn nerve(path: &Path, p_bound: usize, bar: bool, budget: usize) -> Result<Outcome> {
    let (_, m) = load_monoid(path)?;
    let manifest = RunManifest::new("nerve", &[path])
        .param("p_bound", p_bound)
        .param("bar", bar)
        .param("budget", budget);
    if !bar {
        let h = nerve_q_homology(m.as_ref(), p_bound, budget)?;
        let below = if p_bound > 1 {
            Some(nerve_q_homology(m.as_ref(), p_bound - 1, budget)?)
        } else {
            None
        };
        return Ok(Outcome {
            manifest,
            pass: true,
            result: json!({
                "cells": h.cells,
                "H0": h.homology[0],
                "H1": h.homology[1],
                "H0_name": h.homology[0].to_string(),
                "H1_name": h.homology[1].to_string(),
                "previous_bound": below.map(|b| json!({
                    "p_bound": p_bound - 1,
                    "H0": b.homology[0],
                    "H1": b.homology[1],
                    "H1_stable": b.homology[1] == h.homology[1],
                })),
            }),
        });
    }
    let a = TotalMonoid::from_partial(m.as_ref())?;
    let one = nerve_homology(&BarCategory::one_object(a.clone())?, 1, budget)?;
    let k = grothendieck_group(&pi0_presentation(m.as_ref(), 2)?).group;
    let id: Vec<usize> = (0..a.len()).collect();
    let two = nerve_homology(&BarCategory::new(a.clone(), &a, &id)?, 1, budget)?;
    let agree = one.homology[1] == k;
    let contractible = two.homology[0] == labstrings::completion::AbelianGroup::free(1) && two.homology[1].is_trivial();
    Ok(Outcome {
        manifest,
        pass: agree && contractible,
        result: json!({
            "one_object": {"cells": one.cells, "H1": one.homology[1], "H1_name": one.homology[1].to_string()},
            "grothendieck": {"group": k, "name": k.to_string()},
            "agree": agree,
            "two_sided": {
                "cells": two.cells,
                "H0": two.homology[0],
                "H1": two.homology[1],
                "contractible_through_degree_1": contractible,
            },
        }),
    })
}

pub fn snf(path: &Path) -> Result<Outcome> {
    let (a, cols) = int_matrix_from_json(&read_json(path)?)?;
    let manifest = RunManifest::new("snf", &[path]);
    let s = smith_normal_form(&a, cols);
    let check = s.verify(&a);
    Ok(Outcome {
        manifest,
        pass: check.is_ok(),
        result: json!({
            "U": matrix_json(&s.u),
            "D": matrix_json(&s.d),
            "V": matrix_json(&s.v),
            "diagonal": big_strings(&s.diagonal()),
            "rank": s.rank(),
            "certificate": check.err().unwrap_or_else(|| "verified".into()),
        }),
    })
}
