//! Command dispatch for the `patchwork` binary.

pub mod report;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use sha2::{Digest, Sha256};

use patchwork_core::complex::TropicalComplex;
use patchwork_core::cosheaf::{chi_y_at_minus_one, tropical_homology, Flavor};
use patchwork_core::curves::{
    component_count, cycle_basis, d1_matrix, enumerate_admissible, exposed_edges, haas_predicate,
    is_admissible, twists_from_phase, DEFAULT_CAP,
};
use patchwork_core::error::Error;
use patchwork_core::filtration::verify_exact_commutative;
use patchwork_core::instance::{parse_instance_bytes, Instance};
use patchwork_core::phase::{dimension_audit, real_betti, validate_phase, AuditReport};
use patchwork_core::spectral::{
    euler_from, page_audit, sharpness_from, spectral_sequence, transpose, SpectralReport,
};

use report::{InstanceInfo, Report, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(
    name = "patchwork",
    version,
    about = "Real tropical hypersurfaces from primitive patchworks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Use Borel-Moore chains even when the compactification is complete.
    #[arg(long, global = true)]
    pub borel_moore: bool,
    /// Last page of the spectral sequence to compute.
    #[arg(long, global = true)]
    pub max_page: Option<usize>,
    /// Largest number of bounded edges `curve enumerate` will accept.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    /// Do not warn that the triangulation is taken to be regular.
    #[arg(long, global = true)]
    pub assume_regular: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and check an instance.
    Validate { instance: PathBuf },
    /// Tropical homology H_q(X; F_p).
    TropHomology { instance: PathBuf },
    /// Z/2 Betti numbers of the patchworked hypersurface.
    RealBetti { instance: PathBuf },
    /// Pages of the spectral sequence of the sign cosheaf filtration.
    Spectral { instance: PathBuf },
    /// Whether the real hypersurface is maximal.
    Maximal { instance: PathBuf },
    /// Dimension, exactness, Euler and page audits.
    Audit { instance: PathBuf },
    /// Plane curve tools.
    Curve {
        #[command(subcommand)]
        command: CurveCommand,
    },
    /// List every face id of the complex.
    EmitIds { instance: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum CurveCommand {
    Twists { instance: PathBuf },
    Admissible { instance: PathBuf },
    Components { instance: PathBuf },
    Haas { instance: PathBuf },
    Enumerate { instance: PathBuf },
}

impl Cli {
    pub fn instance_path(&self) -> &Path {
        match &self.command {
            Command::Validate { instance }
            | Command::TropHomology { instance }
            | Command::RealBetti { instance }
            | Command::Spectral { instance }
            | Command::Maximal { instance }
            | Command::Audit { instance }
            | Command::EmitIds { instance } => instance,
            Command::Curve { command } => match command {
                CurveCommand::Twists { instance }
                | CurveCommand::Admissible { instance }
                | CurveCommand::Components { instance }
                | CurveCommand::Haas { instance }
                | CurveCommand::Enumerate { instance } => instance,
            },
        }
    }

    pub fn command_name(&self) -> String {
        let name = match &self.command {
            Command::Validate { .. } => "validate",
            Command::TropHomology { .. } => "trop-homology",
            Command::RealBetti { .. } => "real-betti",
            Command::Spectral { .. } => "spectral",
            Command::Maximal { .. } => "maximal",
            Command::Audit { .. } => "audit",
            Command::EmitIds { .. } => "emit-ids",
            Command::Curve { command } => {
                return format!(
                    "curve {}",
                    match command {
                        CurveCommand::Twists { .. } => "twists",
                        CurveCommand::Admissible { .. } => "admissible",
                        CurveCommand::Components { .. } => "components",
                        CurveCommand::Haas { .. } => "haas",
                        CurveCommand::Enumerate { .. } => "enumerate",
                    }
                )
            }
        };
        name.to_string()
    }

    fn flavor(&self, x: &TropicalComplex) -> Flavor {
        if self.borel_moore {
            Flavor::BorelMoore
        } else {
            Flavor::natural(x)
        }
    }
}

/// A failed run: the error plus any face-level diagnostics.
#[derive(Debug)]
pub struct Failure {
    pub command: String,
    pub path: String,
    pub error: Error,
}

impl Failure {
    pub fn details(&self) -> Vec<String> {
        match &self.error {
            Error::InvalidTriangulation(v) | Error::InvalidPhase(v) => v.clone(),
            _ => Vec::new(),
        }
    }

    /// One-line summary; the diagnostics are listed separately.
    pub fn headline(&self) -> String {
        match &self.error {
            Error::InvalidTriangulation(_) => "invalid triangulation".into(),
            Error::InvalidPhase(_) => "invalid real phase structure".into(),
            e => e.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        let value = json!({
            "schema": report::SCHEMA,
            "command": self.command,
            "instance": {"path": self.path},
            "error": {"message": self.error.to_string(), "details": self.details()},
        });
        serde_json::to_string_pretty(&value).expect("serializable error")
    }
}

fn flavor_name(f: Flavor) -> String {
    match f {
        Flavor::Ordinary => "ordinary".into(),
        Flavor::BorelMoore => "borel-moore".into(),
    }
}

fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn ids(x: &TropicalComplex, faces: &[usize]) -> Vec<String> {
    faces.iter().map(|&f| x.faces[f].id.to_string()).collect()
}

fn push_audit(r: &mut Report, a: AuditReport) {
    r.value(&format!("{}_checks", a.name), a.checked);
    r.audit(&a.name, a.failures);
}

fn spectral_tables(r: &mut Report, s: &SpectralReport) {
    for page in &s.pages {
        r.tables
            .push(Table::grid(format!("E^{} dimensions", page.r), &page.dims));
    }
    let mut d = Table::new(
        "non-zero differentials",
        &["page", "source (q,p)", "target (q,p)", "rank"],
    );
    for page in &s.pages {
        for x in &page.differentials {
            d.row([
                x.page.to_string(),
                format!("({},{})", x.source.0, x.source.1),
                format!("({},{})", x.target.0, x.target.1),
                x.rank.to_string(),
            ]);
        }
    }
    r.tables.push(d);
    r.tables
        .push(Table::grid("E^inf dimensions", &s.e_infinity));
    r.value("degenerates_at", s.degenerates_at);
    r.value("real_betti", &s.real_betti);
}

fn curve_twists(inst: &Instance) -> patchwork_core::error::Result<Vec<usize>> {
    if let Some(t) = &inst.twists {
        return Ok(t.clone());
    }
    let e = inst.require_phase()?;
    twists_from_phase(&inst.complex, e)
}

fn require_curve(x: &TropicalComplex) -> patchwork_core::error::Result<()> {
    if x.n != 1 || x.triangulation.dim() != 2 {
        return Err(Error::NotACurve);
    }
    Ok(())
}

fn execute(cli: &Cli, inst: &Instance, r: &mut Report) -> patchwork_core::error::Result<()> {
    let x = &inst.complex;
    let flavor = cli.flavor(x);
    match &cli.command {
        Command::Validate { .. } => {
            r.value("dimension", x.n);
            r.value("points", x.triangulation.points.len());
            r.value("simplices", x.triangulation.simplices.len());
            r.value("complete", x.complete);
            r.value("rays", &x.fan.rays);
            let mut faces = Table::new("faces", &["sedentarity", "dim", "count"]);
            let mut counts = std::collections::BTreeMap::new();
            for f in &x.faces {
                *counts
                    .entry((f.id.sedentarity.len(), f.dim))
                    .or_insert(0usize) += 1;
            }
            for ((s, d), c) in counts {
                faces.row([s, d, c]);
            }
            r.tables.push(faces);
            if let Some(src) = inst.phase_source {
                r.value("phase_source", src);
            }
            r.verdict("phase supplied", inst.phase.is_some());
            if let Some(t) = &inst.twists {
                r.value("twists", ids(x, t));
            }
        }
        Command::TropHomology { .. } => {
            r.flavor = Some(flavor_name(flavor));
            let trop: Vec<Vec<usize>> = tropical_homology(x, flavor)?
                .iter()
                .map(|t| t.dims.clone())
                .collect();
            r.tables
                .push(Table::grid("dim H_q(X; F_p)", &transpose(&trop)));
            r.value("chi_y_at_minus_one", chi_y_at_minus_one(x)?);
        }
        Command::RealBetti { .. } => {
            r.flavor = Some(flavor_name(flavor));
            let b = real_betti(x, inst.require_phase()?, flavor)?;
            r.value("real_betti", &b.dims);
            r.value("total", b.total());
            r.value("euler_characteristic", b.euler_char());
        }
        Command::Spectral { .. } => {
            r.flavor = Some(flavor_name(flavor));
            let s = spectral_sequence(x, inst.require_phase()?, flavor, cli.max_page)?;
            spectral_tables(r, &s);
            r.verdict("maximal", s.maximal);
        }
        Command::Maximal { .. } => {
            if !x.complete {
                return Err(Error::NonCompact);
            }
            r.flavor = Some(flavor_name(Flavor::Ordinary));
            let e = inst.require_phase()?;
            let s = spectral_sequence(x, e, Flavor::Ordinary, None)?;
            let trop: Vec<Vec<usize>> = tropical_homology(x, Flavor::Ordinary)?
                .iter()
                .map(|t| t.dims.clone())
                .collect();
            let sharp = sharpness_from(&s, &transpose(&trop));
            let mut rows = Table::new("row bounds", &["q", "b_q", "sum_p h_{q,p}", "attained"]);
            for row in &sharp.rows {
                rows.row([
                    row.q.to_string(),
                    row.real_betti.to_string(),
                    row.bound.to_string(),
                    row.attained.to_string(),
                ]);
            }
            r.tables.push(rows);
            r.value("real_betti", &s.real_betti);
            r.value("degenerates_at", s.degenerates_at);
            r.verdict("maximal", s.maximal);
            r.verdict("vanishing pattern", sharp.vanishing_pattern);
            if !sharp.unexpected.is_empty() {
                r.warnings.push(format!(
                    "{} differentials outside the permitted shapes",
                    sharp.unexpected.len()
                ));
            }
        }
        Command::Audit { .. } => {
            let e = inst.require_phase()?;
            r.flavor = Some(flavor_name(flavor));
            push_audit(r, dimension_audit(x, e)?);
            push_audit(r, verify_exact_commutative(x, e)?);
            let s = spectral_sequence(x, e, flavor, cli.max_page)?;
            let euler = euler_from(&s, chi_y_at_minus_one(x)?);
            r.value("euler_page_chars", &euler.page_chars);
            r.value("euler_homology", euler.homology_char);
            r.value("chi_y_at_minus_one", euler.chi_y_at_minus_one);
            let mut failures = Vec::new();
            if !euler.holds {
                failures.push(format!(
                    "page characteristics {:?}, homology {}, chi_y(-1) {}",
                    euler.page_chars, euler.homology_char, euler.chi_y_at_minus_one
                ));
            }
            r.audit("euler", failures);
            push_audit(r, page_audit(&s));
        }
        Command::EmitIds { .. } => {
            let mut t = Table::new("faces", &["id", "dim", "bounded", "facet"]);
            for f in &x.faces {
                t.row([
                    f.id.to_string(),
                    f.dim.to_string(),
                    f.bounded.to_string(),
                    f.is_facet().to_string(),
                ]);
            }
            r.tables.push(t);
        }
        Command::Curve { command } => {
            require_curve(x)?;
            match command {
                CurveCommand::Twists { .. } => {
                    let t = curve_twists(inst)?;
                    r.value("twists", ids(x, &t));
                    r.verdict("admissible", is_admissible(x, &t)?);
                }
                CurveCommand::Admissible { .. } => {
                    let t = curve_twists(inst)?;
                    r.verdict("admissible", is_admissible(x, &t)?);
                }
                CurveCommand::Components { .. } => {
                    let t = curve_twists(inst)?;
                    let m = d1_matrix(x, &t)?;
                    let basis = cycle_basis(x)?;
                    let mut table = Table::new("d1 pairing", &["cycle"]);
                    table.columns.extend(
                        basis
                            .centers
                            .iter()
                            .map(|c| format!("{:?}", x.triangulation.points[*c])),
                    );
                    for (i, row) in m.to_rows().iter().enumerate() {
                        let mut cells =
                            vec![format!("{:?}", x.triangulation.points[basis.centers[i]])];
                        cells.extend(row.iter().map(u8::to_string));
                        table.rows.push(cells);
                    }
                    r.tables.push(table);
                    r.value("components", component_count(x, &t)?);
                    r.value("genus", basis.cycles.len());
                }
                CurveCommand::Haas { .. } => {
                    let t = curve_twists(inst)?;
                    let ex = exposed_edges(x)?;
                    r.value("non_exposed_edges", ids(x, &ex.hidden));
                    r.verdict("haas", haas_predicate(x, &t)?);
                }
                CurveCommand::Enumerate { .. } => {
                    let listing = enumerate_admissible(x, cli.cap)?;
                    let genus = cycle_basis(x)?.cycles.len();
                    let mut t =
                        Table::new("admissible twist sets", &["twists", "components", "haas"]);
                    for item in &listing {
                        t.row([
                            ids(x, &item.twists).join(" "),
                            item.components.to_string(),
                            item.haas.to_string(),
                        ]);
                    }
                    r.tables.push(t);
                    r.value("admissible", listing.len());
                    r.value(
                        "maximal",
                        listing.iter().filter(|i| i.components == genus + 1).count(),
                    );
                    r.value("haas", listing.iter().filter(|i| i.haas).count());
                }
            }
        }
    }
    Ok(())
}

/// Runs one command on its instance file.
pub fn run(cli: &Cli) -> Result<Report, Failure> {
    let path = cli.instance_path();
    let fail = |error: Error| Failure {
        command: cli.command_name(),
        path: path.display().to_string(),
        error,
    };
    let bytes = std::fs::read(path).map_err(|e| fail(e.into()))?;
    let inst = parse_instance_bytes(&bytes).map_err(fail)?;
    let mut r = Report::new(
        &cli.command_name(),
        InstanceInfo {
            path: path.display().to_string(),
            sha256: digest(&bytes),
        },
    );
    if let Some(e) = &inst.phase {
        validate_phase(&inst.complex, e).map_err(|v| fail(Error::InvalidPhase(v)))?;
    }
    if !cli.assume_regular && inst.complex.triangulation.simplices.len() > 1 {
        r.warnings
            .push("the triangulation is assumed to be regular; this is not checked".into());
    }
    execute(cli, &inst, &mut r).map_err(fail)?;
    Ok(r)
}
