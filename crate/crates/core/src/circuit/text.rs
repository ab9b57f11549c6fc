//! Line-oriented circuit text format.
//!
//! ```text
//! qedsim-circuit v1
//! qubits 5
//! moment pad=0 | RY(1.5707963267948966) q=3 t=20 | RY(1.5707963267948966) q=4 t=20
//! moment pad=31 | CZ q=3,1 t=31
//! moment pad=0 | MEASURE_X q=3 t=20 label=P_t
//! ```
//!
//! One line per moment; entries are separated by `|`. Angles and durations
//! use the shortest round-trip decimal form, so text output is stable.

use std::fmt::Write;

use super::{
    Basis, ChannelKind, ChannelSite, Circuit, Gate, GateKind, MeasureMarker, Moment, MomentOp,
};
use crate::error::{Error, Result};
use crate::scalar::Real;

const HEADER: &str = "qedsim-circuit v1";

pub(super) fn to_text<T: Real>(c: &Circuit<T>) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "qubits {}", c.n_qubits()).unwrap();
    for m in c.moments() {
        write!(out, "moment pad={}", m.padding()).unwrap();
        for op in m.ops() {
            out.push_str(" | ");
            match op {
                MomentOp::Gate(g) => {
                    out.push_str(g.kind().name());
                    if let Some(a) = g.kind().angle() {
                        write!(out, "({a})").unwrap();
                    }
                    write!(out, " q={} t={}", join(g.targets()), g.duration()).unwrap();
                }
                MomentOp::Measure(mm) => {
                    if mm.label.is_empty()
                        || mm
                            .label
                            .chars()
                            .any(|ch| ch.is_whitespace() || ch == '|' || ch == '=')
                    {
                        return Err(Error::InvalidParameter(format!(
                            "label `{}` cannot be written to circuit text",
                            mm.label
                        )));
                    }
                    let basis = match mm.basis {
                        Basis::Z => "MEASURE_Z",
                        Basis::X => "MEASURE_X",
                    };
                    write!(
                        out,
                        "{basis} q={} t={} label={}",
                        mm.qubit, mm.duration, mm.label
                    )
                    .unwrap();
                }
                MomentOp::Channel(site) => {
                    let head = match &site.kind {
                        ChannelKind::BitFlip(p) => format!("BITFLIP({p})"),
                        ChannelKind::AmplitudeDamping(g) => format!("AMPDAMP({g})"),
                        ChannelKind::Dephasing(c) => format!("DEPHASE({c})"),
                        ChannelKind::Custom(_) => {
                            return Err(Error::InvalidParameter(
                                "custom Kraus channels have no text form".into(),
                            ))
                        }
                    };
                    write!(out, "{head} q={} t={}", join(&site.targets), site.duration).unwrap();
                }
            }
        }
        out.push('\n');
    }
    Ok(out)
}

fn join(qs: &[usize]) -> String {
    qs.iter()
        .map(|q| q.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub(super) fn from_text<T: Real>(s: &str) -> Result<Circuit<T>> {
    let mut lines = s
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (ln, header) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    if header != HEADER {
        return Err(perr(ln, format!("expected `{HEADER}`")));
    }
    let (ln, q) = lines
        .next()
        .ok_or_else(|| perr(ln + 1, "missing qubit count"))?;
    let n: usize = q
        .strip_prefix("qubits ")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| perr(ln, "expected `qubits <n>`"))?;
    let mut circuit = Circuit::new(n);
    for (ln, line) in lines {
        let mut parts = line.split('|').map(str::trim);
        let head = parts.next().unwrap_or_default();
        let pad = head
            .strip_prefix("moment")
            .map(str::trim)
            .and_then(|r| r.strip_prefix("pad="))
            .ok_or_else(|| perr(ln, "expected `moment pad=<ns>`"))?;
        let pad: f64 = pad.parse().map_err(|_| perr(ln, "bad padding"))?;
        let mut ops = Vec::new();
        for entry in parts {
            ops.push(parse_entry::<T>(entry).map_err(|e| perr(ln, e))?);
        }
        let moment = Moment::new(ops)
            .map_err(|e| perr(ln, e.to_string()))?
            .padded(pad);
        circuit.push(moment).map_err(|e| perr(ln, e.to_string()))?;
    }
    Ok(circuit)
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_entry<T: Real>(entry: &str) -> std::result::Result<MomentOp<T>, String> {
    let mut tokens = entry.split_whitespace();
    let head = tokens.next().ok_or("empty entry")?;
    let mut q = None;
    let mut t = None;
    let mut label = None;
    for tok in tokens {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| format!("bad field `{tok}`"))?;
        match k {
            "q" => {
                let qs: std::result::Result<Vec<usize>, _> = v.split(',').map(str::parse).collect();
                q = Some(qs.map_err(|_| format!("bad qubit list `{v}`"))?);
            }
            "t" => {
                t = Some(
                    v.parse::<f64>()
                        .map_err(|_| format!("bad duration `{v}`"))?,
                )
            }
            "label" => label = Some(v.to_string()),
            other => return Err(format!("unknown field `{other}`")),
        }
    }
    let q = q.ok_or("missing q=")?;
    let t = t.ok_or("missing t=")?;
    let (name, arg) = match head.split_once('(') {
        Some((name, rest)) => {
            let v = rest.strip_suffix(')').ok_or("unclosed parenthesis")?;
            let v: f64 = v.parse().map_err(|_| format!("bad parameter `{v}`"))?;
            (name, Some(T::lit(v)))
        }
        None => (head, None),
    };
    let op = match name {
        "MEASURE_Z" | "MEASURE_X" => {
            let basis = if name == "MEASURE_Z" {
                Basis::Z
            } else {
                Basis::X
            };
            if q.len() != 1 {
                return Err("measurement takes one qubit".into());
            }
            let label = label.ok_or("missing label=")?;
            MomentOp::Measure(MeasureMarker::new(q[0], basis, label).with_duration(t))
        }
        "BITFLIP" | "AMPDAMP" | "DEPHASE" => {
            let a = arg.ok_or("channel needs a parameter")?;
            let kind = match name {
                "BITFLIP" => ChannelKind::BitFlip(a),
                "AMPDAMP" => ChannelKind::AmplitudeDamping(a),
                _ => ChannelKind::Dephasing(a),
            };
            let mut site = ChannelSite::new(kind, &q).map_err(|e| e.to_string())?;
            site.duration = t;
            MomentOp::Channel(site)
        }
        _ => {
            let kind =
                GateKind::from_name(name, arg).ok_or_else(|| format!("unknown gate `{head}`"))?;
            MomentOp::Gate(Gate::timed(kind, &q, t).map_err(|e| e.to_string())?)
        }
    };
    Ok(op)
}
