//! Run configuration, report documents and the command implementations
//! behind the `cosetlab` binary.
//!
//! Reports serialize to canonical JSON: sorted keys, no whitespace. Fields
//! that legitimately vary between identical runs (timings, worker count,
//! cache status) live in `execution` objects, which
//! [`ReportDocument::comparable_json`] strips.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cache::{cache_lattice, spec_key};
use crate::catalog;
use crate::counting::{
    census, check_triple_inequalities, TripleCensus, TripleDiagnostics, DEFAULT_CENSUS_CAP,
};
use crate::error::{Error, Result};
use crate::group::{load_group, FiniteGroup, GroupSpec, DEFAULT_ORDER_CAP};
use crate::lemmas::{run_lemma_suite, LemmaConfig, LemmaSummary};
use crate::subgroup::{enumerate_subgroups, Subgroup, DEFAULT_SUBGROUP_CAP};
use crate::verifier::{
    verify_with_lattice, VerificationReport, VerifyOptions, DEFAULT_CLIQUE_CAP, K_RANGE,
    PROVEN_MAX_K,
};

pub const REPORT_FORMAT: &str = "cosetlab-report-v1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Catalog,
    Verify,
    Lemmas,
    Census,
    Subgroups,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    pub order: usize,
    pub subgroups: usize,
    pub cliques: usize,
    pub census: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            order: DEFAULT_ORDER_CAP,
            subgroups: DEFAULT_SUBGROUP_CAP,
            cliques: DEFAULT_CLIQUE_CAP,
            census: DEFAULT_CENSUS_CAP,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    /// Path to a spec file, or a catalog name.
    pub group: Option<String>,
    pub k_min: usize,
    pub k_max: usize,
    pub caps: Caps,
    pub jobs: usize,
    /// `None` disables the lattice cache.
    pub cache_dir: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub seed: u64,
    /// Lattice positions for a single census block.
    pub triple: Option<[usize; 3]>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            group: None,
            k_min: 2,
            k_max: PROVEN_MAX_K,
            caps: Caps::default(),
            jobs: 1,
            cache_dir: None,
            report: None,
            seed: 0,
            triple: None,
        }
    }

    pub fn with_group(mut self, group: impl Into<String>) -> Self {
        self.group = Some(group.into());
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !K_RANGE.contains(&self.k_min)
            || !K_RANGE.contains(&self.k_max)
            || self.k_min > self.k_max
        {
            return bad(format!(
                "k range {}..{} must lie within {}..{}",
                self.k_min,
                self.k_max,
                K_RANGE.start(),
                K_RANGE.end()
            ));
        }
        let c = &self.caps;
        if c.order == 0 || c.subgroups == 0 || c.cliques == 0 || c.census == 0 {
            return bad("caps must be positive".into());
        }
        if self.jobs == 0 {
            return bad("worker count must be positive".into());
        }
        if self.command != Command::Catalog && self.group.is_none() {
            return bad("a group is required".into());
        }
        Ok(())
    }

    fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            group: self.group.clone(),
            k_min: self.k_min,
            k_max: self.k_max,
            caps: self.caps.clone(),
            seed: self.seed,
            triple: self.triple,
        }
    }
}

/// The parts of [`RunConfig`] that determine the result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigEcho {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    pub k_min: usize,
    pub k_max: usize,
    pub caps: Caps,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triple: Option<[usize; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupMeta {
    pub label: String,
    pub order: usize,
    pub abelian: bool,
    /// SHA-256 of the canonical spec JSON.
    pub spec_key: String,
    pub spec: GroupSpec,
    pub subgroup_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CensusBlock {
    /// Lattice positions of the three subgroups.
    pub subgroups: [usize; 3],
    pub census: TripleCensus,
    pub diagnostics: TripleDiagnostics,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupEntry {
    pub id: usize,
    pub order: usize,
    pub index: usize,
    pub elements: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub name: String,
    pub order: usize,
    pub subgroup_count: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunExecution {
    pub elapsed_ms: u64,
    pub jobs: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub format: String,
    pub tool_version: String,
    pub command: Command,
    pub config: ConfigEcho,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupMeta>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verification: Vec<VerificationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemmas: Option<LemmaSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub census: Option<Vec<CensusBlock>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroups: Option<Vec<SubgroupEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog: Option<Vec<CatalogEntry>>,
    pub execution: RunExecution,
}

fn strip_execution(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Object(map) => {
            map.remove("execution");
            map.values_mut().for_each(strip_execution);
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(strip_execution),
        _ => {}
    }
}

impl ReportDocument {
    fn new(config: &RunConfig) -> Self {
        ReportDocument {
            format: REPORT_FORMAT.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            command: config.command,
            config: config.echo(),
            group: None,
            verification: Vec::new(),
            lemmas: None,
            census: None,
            subgroups: None,
            catalog: None,
            execution: RunExecution {
                elapsed_ms: 0,
                jobs: config.jobs,
                cache: None,
            },
        }
    }

    /// Canonical JSON: sorted keys, no whitespace.
    pub fn to_canonical_json(&self) -> String {
        // serde_json's default map is ordered by key.
        serde_json::to_value(self)
            .expect("report serializes")
            .to_string()
    }

    /// Canonical JSON with every `execution` object removed.
    pub fn comparable_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        strip_execution(&mut v);
        v.to_string()
    }

    /// Parses a report, rejecting unknown fields and other formats.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ReportDocument = serde_json::from_str(text)?;
        if doc.format != REPORT_FORMAT {
            return Err(Error::InvalidSpec(format!(
                "unexpected report format {:?}",
                doc.format
            )));
        }
        Ok(doc)
    }

    /// Whether a proven case produced a violation or a check failed.
    pub fn signals_bug(&self) -> bool {
        self.verification
            .iter()
            .any(|r| r.k <= PROVEN_MAX_K && !r.violations.is_empty())
            || self.lemmas.as_ref().is_some_and(|l| l.total_failures() > 0)
            || self
                .census
                .as_ref()
                .is_some_and(|blocks| blocks.iter().any(|b| !b.diagnostics.all_pass()))
    }

    /// Process exit code for a successfully produced document.
    pub fn exit_code(&self) -> i32 {
        if self.signals_bug() {
            1
        } else {
            0
        }
    }

    /// Writes the canonical JSON (with trailing newline) to `path`.
    pub fn write_to(&self, path: &Path) -> Result<()> {
        let mut text = self.to_canonical_json();
        text.push('\n');
        fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Exit code for a failed command: 3 for caps, 2 for everything else.
pub fn error_exit_code(e: &Error) -> i32 {
    if e.is_cap() {
        3
    } else {
        2
    }
}

/// Loads a group from a spec file, or by catalog name when no such file
/// exists.
pub fn resolve_group(source: &str, order_cap: usize) -> Result<FiniteGroup> {
    let path = Path::new(source);
    let looks_like_path =
        source.ends_with(".json") || source.contains('/') || source.contains('\\');
    if path.is_file() || looks_like_path {
        let text = fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let spec = GroupSpec::from_json(&text)?;
        load_group(&spec, order_cap)
    } else {
        load_group(&catalog::spec_for(source)?, order_cap)
    }
}

struct Loaded {
    group: Arc<FiniteGroup>,
    lattice: Vec<Subgroup>,
    cache: Option<String>,
}

fn lattice_for(
    g: &Arc<FiniteGroup>,
    config: &RunConfig,
) -> Result<(Vec<Subgroup>, Option<String>)> {
    match &config.cache_dir {
        Some(dir) => {
            let (lattice, record) = cache_lattice(g, dir, config.caps.subgroups)?;
            Ok((lattice, Some(record.status.as_str().to_string())))
        }
        None => Ok((enumerate_subgroups(g, config.caps.subgroups)?, None)),
    }
}

fn load(config: &RunConfig) -> Result<Loaded> {
    config.validate()?;
    let source = config.group.as_deref().expect("validated");
    let group = Arc::new(resolve_group(source, config.caps.order)?);
    let (lattice, cache) = lattice_for(&group, config)?;
    Ok(Loaded {
        group,
        lattice,
        cache,
    })
}

fn meta(loaded: &Loaded) -> GroupMeta {
    let g = &loaded.group;
    GroupMeta {
        label: g.label().to_string(),
        order: g.order(),
        abelian: g.is_abelian(),
        spec_key: spec_key(g),
        spec: g.spec().clone(),
        subgroup_count: loaded.lattice.len(),
    }
}

fn finish(mut doc: ReportDocument, started: Instant, cache: Option<String>) -> ReportDocument {
    doc.execution.elapsed_ms = started.elapsed().as_millis() as u64;
    doc.execution.cache = cache;
    doc
}

/// Lists the catalog with orders and subgroup counts.
pub fn cmd_catalog(config: &RunConfig) -> Result<ReportDocument> {
    config.validate()?;
    let started = Instant::now();
    let mut doc = ReportDocument::new(config);
    let mut entries = Vec::new();
    for name in catalog::names() {
        let g = Arc::new(catalog::load(&name)?);
        let (lattice, _) = lattice_for(&g, config)?;
        entries.push(CatalogEntry {
            name,
            order: g.order(),
            subgroup_count: lattice.len(),
        });
    }
    doc.catalog = Some(entries);
    Ok(finish(doc, started, None))
}

/// Human-readable catalog lines, e.g. `S4, order 24, 30 subgroups`.
pub fn catalog_lines(doc: &ReportDocument) -> Vec<String> {
    doc.catalog
        .iter()
        .flatten()
        .map(|e| {
            format!(
                "{}, order {}, {} subgroups",
                e.name, e.order, e.subgroup_count
            )
        })
        .collect()
}

/// Runs the verifier for every `k` in the configured range.
pub fn cmd_verify(config: &RunConfig) -> Result<ReportDocument> {
    let started = Instant::now();
    let loaded = load(config)?;
    let opts = VerifyOptions {
        clique_cap: config.caps.cliques,
        subgroup_cap: config.caps.subgroups,
        jobs: config.jobs,
    };
    let mut doc = ReportDocument::new(config);
    for k in config.k_min..=config.k_max {
        let mut report = verify_with_lattice(&loaded.group, &loaded.lattice, k, &opts)?;
        report.execution.cache = loaded.cache.clone();
        doc.verification.push(report);
    }
    doc.group = Some(meta(&loaded));
    Ok(finish(doc, started, loaded.cache))
}

/// Runs the lemma property suite.
pub fn cmd_lemmas(config: &RunConfig) -> Result<ReportDocument> {
    let started = Instant::now();
    let loaded = load(config)?;
    let lemma_config = LemmaConfig {
        seed: config.seed,
        census_cap: config.caps.census,
        ..LemmaConfig::default()
    };
    let mut doc = ReportDocument::new(config);
    doc.lemmas = Some(run_lemma_suite(
        &loaded.group,
        &loaded.lattice,
        &lemma_config,
    )?);
    doc.group = Some(meta(&loaded));
    Ok(finish(doc, started, loaded.cache))
}

/// Census blocks for one triple of lattice positions, or for every
/// multiset of three positions.
pub fn cmd_census(config: &RunConfig) -> Result<ReportDocument> {
    let started = Instant::now();
    let loaded = load(config)?;
    let m = loaded.lattice.len();
    let triples: Vec<[usize; 3]> = match config.triple {
        Some(t) => {
            if let Some(&bad) = t.iter().find(|&&i| i >= m) {
                return Err(Error::InvalidConfig(format!(
                    "subgroup {bad} out of range; the lattice has {m} subgroups"
                )));
            }
            vec![t]
        }
        None => (0..m)
            .flat_map(|i| (i..m).flat_map(move |j| (j..m).map(move |k| [i, j, k])))
            .collect(),
    };
    let mut blocks = Vec::with_capacity(triples.len());
    for [i, j, k] in triples {
        let (a, b, c) = (&loaded.lattice[i], &loaded.lattice[j], &loaded.lattice[k]);
        blocks.push(CensusBlock {
            subgroups: [i, j, k],
            census: census(a, b, c, config.caps.census)?,
            diagnostics: check_triple_inequalities(a, b, c)?,
        });
    }
    let mut doc = ReportDocument::new(config);
    doc.census = Some(blocks);
    doc.group = Some(meta(&loaded));
    Ok(finish(doc, started, loaded.cache))
}

/// Lists the subgroup lattice in canonical order.
pub fn cmd_subgroups(config: &RunConfig) -> Result<ReportDocument> {
    let started = Instant::now();
    let loaded = load(config)?;
    let mut doc = ReportDocument::new(config);
    doc.subgroups = Some(
        loaded
            .lattice
            .iter()
            .enumerate()
            .map(|(id, s)| SubgroupEntry {
                id,
                order: s.order(),
                index: s.index(),
                elements: s.elements(),
            })
            .collect(),
    );
    doc.group = Some(meta(&loaded));
    Ok(finish(doc, started, loaded.cache))
}

/// Dispatches on [`RunConfig::command`].
pub fn run(config: &RunConfig) -> Result<ReportDocument> {
    match config.command {
        Command::Catalog => cmd_catalog(config),
        Command::Verify => cmd_verify(config),
        Command::Lemmas => cmd_lemmas(config),
        Command::Census => cmd_census(config),
        Command::Subgroups => cmd_subgroups(config),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn verify(group: &str) -> RunConfig {
        RunConfig::new(Command::Verify).with_group(group)
    }

    #[test]
    fn s4_k3_to_k4_passes() {
        let mut config = verify("S4");
        config.k_min = 3;
        let doc = cmd_verify(&config).unwrap();
        assert_eq!(doc.verification.len(), 2);
        assert!(doc.verification.iter().all(|r| r.violations.is_empty()));
        assert_eq!(doc.exit_code(), 0);
        assert_eq!(doc.group.as_ref().unwrap().subgroup_count, 30);
    }

    #[test]
    fn report_round_trips_and_is_canonical() {
        let doc = cmd_verify(&verify("D4")).unwrap();
        let text = doc.to_canonical_json();
        assert!(!text.contains(char::is_whitespace));
        let back = ReportDocument::from_json(&text).unwrap();
        assert_eq!(back, doc);
        assert!(!doc.comparable_json().contains("elapsed_ms"));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let doc = cmd_subgroups(&RunConfig::new(Command::Subgroups).with_group("C6")).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&doc.to_canonical_json()).unwrap();
        v["surprise"] = serde_json::json!(1);
        assert!(ReportDocument::from_json(&v.to_string()).is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = verify("S4");
        c.k_min = 1;
        assert!(matches!(cmd_verify(&c), Err(Error::InvalidConfig(_))));
        let mut c = verify("S4");
        c.k_min = 5;
        c.k_max = 4;
        assert!(c.validate().is_err());
        let mut c = verify("S4");
        c.caps.cliques = 0;
        assert!(c.validate().is_err());
        assert!(RunConfig::new(Command::Verify).validate().is_err());
        assert!(RunConfig::new(Command::Catalog).validate().is_ok());
    }

    #[test]
    fn exit_codes() {
        // A5 has no candidate cliques for k <= 4; the cap bites from k = 5.
        let mut c = verify("A5");
        c.k_max = 6;
        c.caps.cliques = 1;
        assert_eq!(error_exit_code(&cmd_verify(&c).unwrap_err()), 3);
        let e = resolve_group("missing/spec.json", DEFAULT_ORDER_CAP).unwrap_err();
        assert_eq!(error_exit_code(&e), 2);
        assert_eq!(error_exit_code(&resolve_group("Z7", 10).unwrap_err()), 2);
    }

    #[test]
    fn census_single_triple() {
        let mut c = RunConfig::new(Command::Census).with_group("S3");
        c.triple = Some([1, 1, 1]);
        let doc = cmd_census(&c).unwrap();
        let blocks = doc.census.unwrap();
        assert_eq!(blocks.len(), 1);
        assert!(blocks[0].census.enumerated);
        c.triple = Some([0, 0, 99]);
        assert!(matches!(cmd_census(&c), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn subgroup_listing_is_sorted() {
        let doc = cmd_subgroups(&RunConfig::new(Command::Subgroups).with_group("Q8")).unwrap();
        let subs = doc.subgroups.unwrap();
        assert_eq!(subs.len(), 6);
        assert!(subs.windows(2).all(|w| w[0].order <= w[1].order));
    }
}
