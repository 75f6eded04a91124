//! One verifier per `--check` value, each producing a `Report`.

use circlerig::representation::{
    detect_fuchsian_torus, pants_euler, subsurface_euler, verify_chain_order, verify_separation, Report, Representation,
};
use circlerig::surface::{builtin_chain_genus2, standard_pants_decomposition, DirectedChain, SurfacePresentation, Word};
use clap::ValueEnum;
use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    ChainOrder,
    Separation,
    PantsBound,
    Additivity,
    FuchsianTorus,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::ChainOrder => "chain-order",
            Check::Separation => "separation",
            Check::PantsBound => "pants-bound",
            Check::Additivity => "additivity",
            Check::FuchsianTorus => "fuchsian-torus",
        }
    }
}

fn chain_for(rep: &Representation, words: Option<Vec<Word>>) -> anyhow::Result<DirectedChain> {
    match words {
        Some(w) => Ok(DirectedChain::from_words(w)?),
        None if rep.handles() == 2 => Ok(builtin_chain_genus2()),
        None => anyhow::bail!("no builtin chain for genus {}; pass --chain", rep.handles()),
    }
}

fn presentation(rep: &Representation) -> anyhow::Result<SurfacePresentation> {
    match rep.presentation() {
        Some(p) => Ok(*p),
        None => anyhow::bail!("this check needs a closed-surface representation"),
    }
}

pub fn run(rep: &Representation, check: Check, chain: Option<Vec<Word>>) -> anyhow::Result<Report> {
    let name = check.name();
    let tol = rep.tol();
    Ok(match check {
        Check::ChainOrder => {
            let chain = chain_for(rep, chain)?;
            let pass = verify_chain_order(rep, &chain)?;
            Report::new(name, json!({"chain": chain.words(), "tol": tol}), json!({"pass": pass}), json!({}))
        }
        Check::Separation => {
            let chain = chain_for(rep, chain)?;
            let mut pairs = Vec::new();
            let mut pass = true;
            for w in chain.words().windows(2) {
                let ok = verify_separation(rep, &w[0], &w[1])?;
                pass &= ok;
                pairs.push(json!({"a": w[0], "b": w[1], "separated": ok}));
            }
            Report::new(name, json!({"chain": chain.words(), "tol": tol}), json!({"pass": pass}), json!({"pairs": pairs}))
        }
        Check::PantsBound => {
            let d = standard_pants_decomposition(&presentation(rep)?);
            let mut pants = Vec::new();
            let mut pass = true;
            for p in &d.pants {
                let v = pants_euler(rep, p)?;
                pass &= v.lo >= -1.0 - tol && v.hi <= 1.0 + tol;
                pants.push(json!({"label": p.label, "boundary": p.boundary, "value": v}));
            }
            Report::new(name, json!({"decomposition": "standard", "tol": tol}), json!({"pass": pass}), json!({"pants": pants}))
        }
        Check::Additivity => {
            let d = standard_pants_decomposition(&presentation(rep)?);
            let eu = rep.euler_number()?;
            let sum = subsurface_euler(rep, &d)?;
            let pass = sum.contains(eu as f64, tol);
            let pants = d
                .pants
                .iter()
                .map(|p| Ok(json!({"label": p.label, "value": pants_euler(rep, p)?})))
                .collect::<anyhow::Result<Vec<_>>>()?;
            Report::new(
                name,
                json!({"decomposition": "standard", "tol": tol}),
                json!({"pass": pass, "eu": eu, "sum": sum}),
                json!({"pants": pants}),
            )
        }
        Check::FuchsianTorus => {
            let pairs = presentation(rep)?.handle_pairs();
            let found = detect_fuchsian_torus(rep, &pairs)?;
            let pass = found.is_some();
            Report::new(
                name,
                json!({"pairs": pairs.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(), "tol": tol}),
                json!({"pass": pass}),
                json!({"witness": found}),
            )
        }
    })
}
