//! Embedded reference tables: exact fidelities, interpolation parameters,
//! and Choi matrices that the acceptance checks and the CLI `--golden`
//! mode compare against.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact::{parse_rat, Rat};
use crate::qmat::QMatrix;

const TABLE3: &str = include_str!("../data/table3.json");
const SWEEP: &str = include_str!("../data/sweep.json");
const MAJORITY: &str = include_str!("../data/majority_sequence.json");
const PARITY: &str = include_str!("../data/parity_sequence.json");
const CHOI_OPTIMAL: &str = include_str!("../data/choi_optimal.json");
const CHOI_IDEAL: &str = include_str!("../data/choi_ideal.json");

/// One row of the small-function reference table.
#[derive(Clone, Debug)]
pub struct Table3Row {
    pub table: String,
    pub fidelity: Rat,
    pub t: Vec<Rat>,
    pub per_weight: Vec<Rat>,
}

fn parse_json(raw: &str) -> Result<Value> {
    serde_json::from_str(raw).map_err(|e| Error::Parse(format!("golden data: {e}")))
}

fn rat_list(v: &Value) -> Result<Vec<Rat>> {
    v.as_array()
        .ok_or_else(|| Error::Parse("expected array of rationals".into()))?
        .iter()
        .map(|x| {
            parse_rat(
                x.as_str()
                    .ok_or_else(|| Error::Parse("expected rational string".into()))?,
            )
        })
        .collect()
}

/// Reference optima for all 1- and 3-bit functions.
pub fn table3() -> Result<Vec<Table3Row>> {
    let doc = parse_json(TABLE3)?;
    doc["rows"]
        .as_array()
        .ok_or_else(|| Error::Parse("table3 rows".into()))?
        .iter()
        .map(|row| {
            Ok(Table3Row {
                table: row["table"]
                    .as_str()
                    .ok_or_else(|| Error::Parse("table key".into()))?
                    .to_string(),
                fidelity: parse_rat(
                    row["fidelity"]
                        .as_str()
                        .ok_or_else(|| Error::Parse("fidelity".into()))?,
                )?,
                t: rat_list(&row["t"])?,
                per_weight: rat_list(&row["c"])?,
            })
        })
        .collect()
}

/// Reference fidelities for all functions with n in {1, 3, 5, 7}, keyed
/// (n, truth table).
pub fn sweep() -> Result<BTreeMap<(usize, String), Rat>> {
    let doc = parse_json(SWEEP)?;
    let mut out = BTreeMap::new();
    let map = doc["fidelities"]
        .as_object()
        .ok_or_else(|| Error::Parse("sweep map".into()))?;
    for (n_str, inner) in map {
        let n: usize = n_str
            .parse()
            .map_err(|_| Error::Parse("sweep bit count".into()))?;
        for (table, fid) in inner
            .as_object()
            .ok_or_else(|| Error::Parse("sweep inner map".into()))?
        {
            let fid = parse_rat(
                fid.as_str()
                    .ok_or_else(|| Error::Parse("sweep fidelity".into()))?,
            )?;
            out.insert((n, table.clone()), fid);
        }
    }
    Ok(out)
}

fn sequence(raw: &str) -> Result<Vec<(usize, Rat)>> {
    let doc = parse_json(raw)?;
    doc["sequence"]
        .as_array()
        .ok_or_else(|| Error::Parse("sequence".into()))?
        .iter()
        .map(|pair| {
            let n: usize = pair[0]
                .as_str()
                .ok_or_else(|| Error::Parse("sequence index".into()))?
                .parse()
                .map_err(|_| Error::Parse("sequence index".into()))?;
            Ok((n, parse_rat(pair[1].as_str().ok_or_else(|| Error::Parse("sequence value".into()))?)?))
        })
        .collect()
}

/// Reference majority fidelities for odd n up to 21.
pub fn majority_sequence() -> Result<Vec<(usize, Rat)>> {
    sequence(MAJORITY)
}

/// Reference parity fidelities for odd n up to 39.
pub fn parity_sequence() -> Result<Vec<(usize, Rat)>> {
    sequence(PARITY)
}

fn choi_map(raw: &str) -> Result<BTreeMap<String, QMatrix>> {
    let doc = parse_json(raw)?;
    let mut out = BTreeMap::new();
    for (name, mat) in doc["matrices"]
        .as_object()
        .ok_or_else(|| Error::Parse("matrix map".into()))?
    {
        out.insert(name.clone(), QMatrix::from_json(mat)?);
    }
    Ok(out)
}

/// Reference Choi matrices of the optimal channels, keyed by function
/// name (ID, NOT, MAJ3, PAR3, NPAR3, NMAJ3).
pub fn optimal_choi() -> Result<BTreeMap<String, QMatrix>> {
    choi_map(CHOI_OPTIMAL)
}

/// Reference Choi matrices of the ideal extensions, same keys.
pub fn ideal_choi() -> Result<BTreeMap<String, QMatrix>> {
    choi_map(CHOI_IDEAL)
}

/// Truth table for each named reference function.
pub fn function_table(name: &str) -> Option<&'static str> {
    match name {
        "ID" => Some("0"),
        "NOT" => Some("1"),
        "MAJ3" => Some("00"),
        "PAR3" => Some("01"),
        "NPAR3" => Some("10"),
        "NMAJ3" => Some("11"),
        _ => None,
    }
}

/// Per-weight fidelities each optimal reference channel was built for.
pub fn optimal_fidelities(name: &str) -> Result<Vec<Rat>> {
    let rows = table3()?;
    let table = function_table(name)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown reference function {name}")))?;
    rows.into_iter()
        .find(|r| r.table == table)
        .map(|r| r.per_weight)
        .ok_or_else(|| Error::InvalidArgument("missing reference row".into()))
}
