//! Parameter sets of the three worked coexistence examples (all with `mu = 1`).

use crate::map::Params;
use crate::words::Word;

/// `X = RLR`, `Y = LR` at `delta_R = 3/2`; every `(RLR)^k LR`-cycle attracts.
pub fn param_f() -> Params {
    Params {
        tau_l: -55.0 / 117.0,
        delta_l: 4.0 / 9.0,
        tau_r: -5.0 / 2.0,
        delta_r: 3.0 / 2.0,
        mu: 1.0,
    }
}

/// Nine-digit approximation for `X = RLLR`, `Y = LLR` with `tau_L = 0.5`.
pub fn param_i() -> Params {
    let delta_r = 1.378851759;
    Params {
        tau_l: 0.5,
        delta_l: 1.0 / delta_r,
        tau_r: -1.139755486,
        delta_r,
        mu: 1.0,
    }
}

/// Nine-digit approximation for `X = RLRLR`, `Y = LR` with `tau_L = -0.7`.
pub fn param_c() -> Params {
    let delta_r: f64 = 1.659870677;
    Params {
        tau_l: -0.7,
        delta_l: delta_r.powf(-1.5),
        tau_r: -3.308423793,
        delta_r,
        mu: 1.0,
    }
}

/// A named example: parameters and its `(X, Y)` pair.
#[derive(Clone, Debug)]
pub struct Example {
    pub name: &'static str,
    pub params: Params,
    pub x: Word,
    pub y: Word,
}

pub fn examples() -> Vec<Example> {
    let word = |s: &str| Word::parse(s).expect("static word");
    vec![
        Example {
            name: "F",
            params: param_f(),
            x: word("RLR"),
            y: word("LR"),
        },
        Example {
            name: "I",
            params: param_i(),
            x: word("RLLR"),
            y: word("LLR"),
        },
        Example {
            name: "C",
            params: param_c(),
            x: word("RLRLR"),
            y: word("LR"),
        },
    ]
}

/// Looks up an example by name (`F`, `I`, `C`, or `paramF` etc.), case-insensitive.
pub fn by_name(name: &str) -> Option<Example> {
    let key = name.trim().to_ascii_uppercase();
    let key = key.strip_prefix("PARAM").unwrap_or(&key);
    examples().into_iter().find(|e| e.name == key)
}
