//! Report structures and their text / JSON / CSV renderings.
//!
//! JSON is the machine interface: censuses carry no timestamps or host
//! details, so two runs over the same input are byte-identical regardless of
//! worker count. CSV always uses the fixed four-column schema
//! `q,class_or_theorem,value,multiplicity_or_verdict`.

use std::fmt::Write as _;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

const CSV_HEADER: [&str; 4] = ["q", "class_or_theorem", "value", "multiplicity_or_verdict"];

fn csv_table(rows: &[[String; 4]]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    let bytes = w.into_inner().expect("in-memory flush");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

fn json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// A line named both ways: dense key and normalized coordinate codes.
#[derive(Debug, Clone, Serialize)]
pub struct LineDesc {
    pub key: u64,
    pub coords: [u32; 6],
}

impl LineDesc {
    fn coords_text(&self) -> String {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassRow {
    pub class: String,
    pub count: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub q: u32,
    pub total_lines: u64,
    pub classes: Vec<ClassRow>,
}

impl ClassifyReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json(self),
            Format::Csv => {
                let rows: Vec<[String; 4]> = self
                    .classes
                    .iter()
                    .map(|r| {
                        [
                            self.q.to_string(),
                            r.class.clone(),
                            r.count.to_string(),
                            String::new(),
                        ]
                    })
                    .collect();
                csv_table(&rows)
            }
            Format::Text => {
                let mut out = format!(
                    "line classes in PG(3,{}) ({} lines):\n",
                    self.q, self.total_lines
                );
                for r in &self.classes {
                    let _ = writeln!(out, "  {:<22} {:>12}", r.class, r.count);
                }
                let _ = writeln!(out, "  {:<22} {:>12}", "total", self.total_lines);
                out
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitReport {
    pub q: u32,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<u32>,
    pub line: LineDesc,
    pub class: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[u32; 2]>,
    pub orbit_size: u64,
    pub stabilizer_order: u64,
    pub stabilizer_structure: String,
    pub canonical: LineDesc,
    pub group_order: u64,
}

impl OrbitReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json(self),
            Format::Csv => csv_table(&[[
                self.q.to_string(),
                self.class.clone(),
                self.orbit_size.to_string(),
                self.stabilizer_structure.clone(),
            ]]),
            Format::Text => {
                let mut out = String::new();
                let _ = writeln!(out, "q: {}", self.q);
                let _ = writeln!(
                    out,
                    "line: key {}, coords {} (from {})",
                    self.line.key,
                    self.line.coords_text(),
                    self.source
                );
                if let Some(mu) = self.mu {
                    let _ = writeln!(out, "mu: {mu}");
                }
                let _ = writeln!(out, "class: {}", self.class);
                if let Some([a, b]) = self.witness {
                    let _ = writeln!(out, "witness: ({a}, {b})");
                }
                let _ = writeln!(out, "orbit size: {}", self.orbit_size);
                let _ = writeln!(
                    out,
                    "stabilizer: order {}, structure {}",
                    self.stabilizer_order, self.stabilizer_structure
                );
                let _ = writeln!(
                    out,
                    "canonical representative: key {}, coords {}",
                    self.canonical.key,
                    self.canonical.coords_text()
                );
                let _ = writeln!(out, "group order: {}", self.group_order);
                out
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LengthRow {
    pub length: u64,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RepRow {
    pub key: u64,
    pub length: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub q: u32,
    pub class: String,
    pub class_size: u64,
    pub orbit_count: u64,
    pub orbit_lengths: Vec<LengthRow>,
    pub representatives: Vec<RepRow>,
}

impl CensusReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json(self),
            Format::Csv => {
                let rows: Vec<[String; 4]> = self
                    .orbit_lengths
                    .iter()
                    .map(|r| {
                        [
                            self.q.to_string(),
                            self.class.clone(),
                            r.length.to_string(),
                            r.multiplicity.to_string(),
                        ]
                    })
                    .collect();
                csv_table(&rows)
            }
            Format::Text => {
                let mut out = format!("orbit census, class {}, q = {}\n", self.class, self.q);
                let _ = writeln!(out, "class size: {}", self.class_size);
                let _ = writeln!(out, "orbits: {}", self.orbit_count);
                for r in &self.orbit_lengths {
                    let _ = writeln!(out, "  length {:>8}  x {}", r.length, r.multiplicity);
                }
                let _ = writeln!(out, "representatives (canonical key, orbit length):");
                for r in &self.representatives {
                    let _ = writeln!(out, "  {:>12}  {}", r.key, r.length);
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExploreClassRow {
    pub class: String,
    pub class_size: u64,
    pub orbit_count: u64,
    pub orbit_lengths: Vec<LengthRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExploreReport {
    pub q: u32,
    pub xi: i32,
    pub classes: Vec<ExploreClassRow>,
    pub external_generic_orbit_count: u64,
    pub predicted_external_generic_orbit_count: u64,
    pub external_generic_matches: bool,
    pub total_line_orbit_count: u64,
    pub conjectured_total_line_orbit_count: u64,
    pub conjecture_matches: bool,
}

impl ExploreReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json(self),
            Format::Csv => {
                let mut rows: Vec<[String; 4]> = Vec::new();
                for c in &self.classes {
                    for r in &c.orbit_lengths {
                        rows.push([
                            self.q.to_string(),
                            c.class.clone(),
                            r.length.to_string(),
                            r.multiplicity.to_string(),
                        ]);
                    }
                }
                rows.push([
                    self.q.to_string(),
                    "external_generic_orbit_count".to_owned(),
                    self.external_generic_orbit_count.to_string(),
                    format!("predicted:{}", self.predicted_external_generic_orbit_count),
                ]);
                rows.push([
                    self.q.to_string(),
                    "total_line_orbit_count".to_owned(),
                    self.total_line_orbit_count.to_string(),
                    format!("conjectured:{}", self.conjectured_total_line_orbit_count),
                ]);
                csv_table(&rows)
            }
            Format::Text => {
                let mut out = format!("orbit landscape, q = {} (xi = {})\n", self.q, self.xi);
                for c in &self.classes {
                    let lengths: Vec<String> = c
                        .orbit_lengths
                        .iter()
                        .map(|r| format!("{}x{}", r.multiplicity, r.length))
                        .collect();
                    let _ = writeln!(
                        out,
                        "  {:<22} {:>10} lines  {:>4} orbits  [{}]",
                        c.class,
                        c.class_size,
                        c.orbit_count,
                        lengths.join(", ")
                    );
                }
                let _ = writeln!(
                    out,
                    "external_generic orbits: {} (predicted {}, {})",
                    self.external_generic_orbit_count,
                    self.predicted_external_generic_orbit_count,
                    if self.external_generic_matches {
                        "match"
                    } else {
                        "DIFFERS"
                    }
                );
                let _ = writeln!(
                    out,
                    "total line orbits: {} (conjectured {}, {})",
                    self.total_line_orbit_count,
                    self.conjectured_total_line_orbit_count,
                    if self.conjecture_matches {
                        "match"
                    } else {
                        "DIFFERS"
                    }
                );
                out
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub theorem_id: String,
    pub claim: String,
    pub measured: String,
    /// "pass", "fail", or "not-applicable".
    pub verdict: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub q: u32,
    pub checks: Vec<CheckRow>,
    pub passed: usize,
    pub failed: usize,
    pub not_applicable: usize,
    /// "pass" when no check failed.
    pub overall: String,
}

impl VerifyReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json(self),
            Format::Csv => {
                let rows: Vec<[String; 4]> = self
                    .checks
                    .iter()
                    .map(|c| {
                        [
                            self.q.to_string(),
                            c.theorem_id.clone(),
                            c.measured.clone(),
                            c.verdict.clone(),
                        ]
                    })
                    .collect();
                csv_table(&rows)
            }
            Format::Text => {
                let mut out = format!(
                    "verification battery, q = {}: {} checks, {} passed, {} failed, {} skipped\n",
                    self.q,
                    self.checks.len(),
                    self.passed,
                    self.failed,
                    self.not_applicable
                );
                for c in &self.checks {
                    let tag = match c.verdict.as_str() {
                        "pass" => "[pass]",
                        "fail" => "[FAIL]",
                        _ => "[skip]",
                    };
                    let _ = writeln!(out, "{tag} {} ({:.2}s)", c.theorem_id, c.seconds);
                    let _ = writeln!(out, "    claim:    {}", c.claim);
                    let _ = writeln!(out, "    measured: {}", c.measured);
                }
                let _ = writeln!(out, "overall: {}", self.overall);
                out
            }
        }
    }
}
