//! CSV tables, the run manifest and its verification.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use qedsim::metrics::{Classification, CombinationRow, FidelityReport};
use qedsim::repcode::{Cardinal, Syndrome};

use crate::config::{Experiment, ExperimentConfig};
use crate::experiments::{EntangleReport, ParityReport, SweepReport};
use crate::CliError;

pub const MANIFEST: &str = "manifest.json";
pub const TOOL: &str = "qedsim";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hash of the resolved configuration in its canonical JSON form.
pub fn config_hash(cfg: &ExperimentConfig) -> String {
    sha256_hex(
        serde_json::to_string(cfg)
            .expect("config serializes")
            .as_bytes(),
    )
}

/// Shortest round-trip decimal; negative zero prints as `0`.
pub fn num(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else {
        v.to_string()
    }
}

fn bits(index: usize) -> String {
    format!("{index:03b}")
}

/// In-memory CSV table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(name: &'static str, header: &[&'static str]) -> Self {
        Self {
            name,
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }
}

/// Tables plus the manifest fields a run contributes.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub tables: Vec<Table>,
    pub retained: BTreeMap<String, Vec<f64>>,
    pub summary: BTreeMap<String, Value>,
}

pub fn parity_tables(r: &ParityReport) -> RunOutput {
    let mut dist = Table::new("parity_check.csv", &["input", "syndrome", "probability"]);
    for (&i, d) in &r.distributions {
        for s in Syndrome::ALL {
            dist.rows
                .push(vec![bits(i), s.to_string(), num(d[s.index()])]);
        }
    }
    let mut tables = vec![dist];
    if !r.histograms.is_empty() {
        let mut h = Table::new("parity_histogram.csv", &["input", "syndrome", "count"]);
        for (i, hist) in r.histograms.iter().enumerate() {
            for s in Syndrome::ALL {
                let count = hist.count(&[s.p_t.bit(), s.p_b.bit()]);
                h.rows.push(vec![bits(i), s.to_string(), count.to_string()]);
            }
        }
        tables.push(h);
    }
    let mut summary = BTreeMap::new();
    summary.insert("assignment_fidelity".into(), json!(r.assignment_fidelity));
    let mut retained = BTreeMap::new();
    retained.insert("inputs".into(), r.retained.clone());
    RunOutput {
        tables,
        retained,
        summary,
    }
}

pub fn entangle_tables(r: &EntangleReport) -> RunOutput {
    let mut w = Table::new(
        "entangle_witness.csv",
        &[
            "phi",
            "stabilizer",
            "parity",
            "probability",
            "w_phi_plus",
            "w_phi_minus",
            "w_psi_plus",
            "w_psi_minus",
        ],
    );
    for row in &r.witnesses {
        let ws = &row.witnesses;
        w.rows.push(vec![
            num(row.phi),
            row.set.into(),
            row.parity.letter().to_string(),
            num(row.probability),
            num(ws.w_phi_plus),
            num(ws.w_phi_minus),
            num(ws.w_psi_plus),
            num(ws.w_psi_minus),
        ]);
    }
    let mut m = Table::new(
        "entangle_mermin.csv",
        &[
            "phi",
            "syndrome",
            "probability",
            "mermin_raw",
            "mermin",
            "ghz_fidelity",
        ],
    );
    for row in &r.mermin {
        m.rows.push(vec![
            num(row.phi),
            row.syndrome.to_string(),
            num(row.probability),
            num(row.mermin_raw),
            num(row.mermin),
            num(row.ghz_fidelity),
        ]);
    }
    let mut p = Table::new(
        "entangle_paulis.csv",
        &["phi", "syndrome", "pauli", "expectation"],
    );
    for (s, v) in &r.paulis {
        p.rows.push(vec![
            num(r.pauli_phi),
            Syndrome::ALL[3].to_string(),
            s.clone(),
            num(*v),
        ]);
    }
    let mut summary = BTreeMap::new();
    summary.insert("pauli_phi".into(), json!(r.pauli_phi));
    let min_w = r
        .witnesses
        .iter()
        .map(|x| x.witnesses.min())
        .fold(f64::INFINITY, f64::min);
    summary.insert("min_witness".into(), json!(min_w));
    let max_m = r.mermin.iter().map(|x| x.mermin.abs()).fold(0.0, f64::max);
    summary.insert("max_abs_mermin".into(), json!(max_m));
    let mut retained = BTreeMap::new();
    retained.insert("phi".into(), r.retained.clone());
    RunOutput {
        tables: vec![w, m, p],
        retained,
        summary,
    }
}

fn fidelity_table(name: &'static str, reports: &[FidelityReport<f64>]) -> Table {
    let mut t = Table::new(
        name,
        &["scenario", "pipeline", "p_err", "cardinal", "value"],
    );
    for rep in reports {
        for (p, row) in rep.p_err.iter().zip(&rep.rows) {
            for c in Cardinal::ALL {
                t.rows.push(vec![
                    rep.scenario.to_string(),
                    rep.pipeline.to_string(),
                    num(*p),
                    c.name().into(),
                    num(row.get(c)),
                ]);
            }
            t.rows.push(vec![
                rep.scenario.to_string(),
                rep.pipeline.to_string(),
                num(*p),
                "avg".into(),
                num(row.average()),
            ]);
        }
    }
    t
}

pub fn sweep_tables(r: &SweepReport) -> RunOutput {
    let mut x = Table::new(
        "crossover.csv",
        &["metric", "scenario", "index", "p_grid", "p_interpolated"],
    );
    let mut summary = BTreeMap::new();
    for row in &r.crossovers {
        let key = format!("crossover/{}/scenario{}", row.metric, row.scenario);
        match &row.crossover {
            Some(c) => {
                x.rows.push(vec![
                    row.metric.to_string(),
                    row.scenario.to_string(),
                    c.index.to_string(),
                    num(c.p_grid),
                    num(c.p_interpolated),
                ]);
                summary.insert(key, json!(c.p_interpolated));
            }
            None => {
                x.rows.push(vec![
                    row.metric.to_string(),
                    row.scenario.to_string(),
                    "none".into(),
                    String::new(),
                    String::new(),
                ]);
                summary.insert(key, Value::Null);
            }
        }
    }
    RunOutput {
        tables: vec![
            fidelity_table("f3q.csv", &r.f3q),
            fidelity_table("f_logical.csv", &r.f_logical),
            x,
        ],
        retained: r.retained.clone(),
        summary,
    }
}

pub fn class_slug(c: Classification) -> &'static str {
    match c {
        Classification::QedWins => "qed-wins",
        Classification::IdleWins => "idle-wins",
        Classification::Tie => "tie",
    }
}

pub fn table_tables(rows: &[CombinationRow<f64>]) -> RunOutput {
    let mut t = Table::new(
        "error_table.csv",
        &[
            "label",
            "first",
            "second",
            "case",
            "assignments",
            "qed",
            "idle",
            "class",
        ],
    );
    let mut counts: BTreeMap<String, Value> = BTreeMap::new();
    for r in rows {
        t.rows.push(vec![
            r.label(),
            r.first.to_string(),
            r.second.to_string(),
            r.case.map(String::from).unwrap_or_default(),
            r.assignments.to_string(),
            num(r.qed),
            num(r.idle),
            class_slug(r.class).into(),
        ]);
        let slot = counts
            .entry(format!("rows/{}", class_slug(r.class)))
            .or_insert(json!(0));
        *slot = json!(slot.as_u64().unwrap_or(0) + 1);
    }
    RunOutput {
        tables: vec![t],
        retained: BTreeMap::new(),
        summary: counts,
    }
}

/// Provenance record written next to the tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: Experiment,
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub seed: Option<u64>,
    pub shots: u64,
    pub retained_fractions: BTreeMap<String, Vec<f64>>,
    pub summary: BTreeMap<String, Value>,
    /// File name to sha256 of its bytes.
    pub files: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Manifest {
    pub fn new(
        command: Experiment,
        cfg: &ExperimentConfig,
        out: &RunOutput,
    ) -> Result<Self, CliError> {
        let files = out
            .tables
            .iter()
            .map(|t| Ok((t.name.to_string(), sha256_hex(&t.to_bytes()?))))
            .collect::<Result<_, CliError>>()?;
        Ok(Self {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command,
            config: cfg.clone(),
            config_hash: config_hash(cfg),
            seed: cfg.seed,
            shots: cfg.shots,
            retained_fractions: out.retained.clone(),
            summary: out.summary.clone(),
            files,
            elapsed_ms: None,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn load(dir: &Path) -> Result<Self, CliError> {
        let path = dir.join(MANIFEST);
        let text = fs::read_to_string(&path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Verify(format!("{}: {e}", path.display())))
    }
}

/// Writes every table and the manifest into `dir`, returning the paths.
pub fn write_run(
    dir: &Path,
    out: &RunOutput,
    manifest: &Manifest,
) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut written = Vec::new();
    for t in &out.tables {
        let path = dir.join(t.name);
        fs::write(&path, t.to_bytes()?)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        written.push(path);
    }
    let path = dir.join(MANIFEST);
    fs::write(&path, manifest.to_json())
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    written.push(path);
    Ok(written)
}

/// Checks the manifest against the files on disk and, when given, against
/// a freshly resolved configuration. Returns one message per mismatch.
pub fn verify(dir: &Path, cfg: Option<&ExperimentConfig>) -> Result<Vec<String>, CliError> {
    let m = Manifest::load(dir)?;
    let mut problems = Vec::new();
    let echoed = config_hash(&m.config);
    if echoed != m.config_hash {
        problems.push(format!(
            "config echo hashes to {echoed}, manifest records {}",
            m.config_hash
        ));
    }
    if let Some(c) = cfg {
        let h = config_hash(c);
        if h != m.config_hash {
            problems.push(format!(
                "config hashes to {h}, manifest records {}",
                m.config_hash
            ));
        }
    }
    for (name, want) in &m.files {
        match fs::read(dir.join(name)) {
            Ok(bytes) => {
                let got = sha256_hex(&bytes);
                if &got != want {
                    problems.push(format!("{name}: sha256 {got}, manifest records {want}"));
                }
            }
            Err(e) => problems.push(format!("{name}: {e}")),
        }
    }
    Ok(problems)
}
