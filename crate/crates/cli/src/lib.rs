//! Command-line front end. [`run`] does all the work and returns the exit
//! code and captured output, so the binary is a thin wrapper and tests can
//! drive every subcommand in-process.
//!
//! Exit codes: 0 success, 1 validation errors or failed lookups, 2 usage or
//! I/O errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use stegotax::catalog::{Catalog, CatalogEntry, CatalogError};
use stegotax::descriptor::{self, DescriptorError};
use stegotax::diagnostic::{has_errors, Diagnostic};
use stegotax::taxonomy::{PatternCode, PatternRecord, Taxonomy};
use stegotax::udm::{self, RepresentationPatterns, UdmDocument, UdmError};
use stegotax_service::ServiceConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "stegotax",
    version,
    about = "Parse, check and catalog steganography method descriptors"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Taxonomy file to use instead of the bundled seed.
    #[arg(long, global = true, env = "STEGOTAX_TAXONOMY")]
    taxonomy: Option<PathBuf>,
    /// Catalog store directory.
    #[arg(long, global = true, env = "STEGOTAX_STORE")]
    store: Option<PathBuf>,
    /// Suppress warnings and informational messages on stderr.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a descriptor and show its components.
    Parse(DescriptorArg),
    /// Print the canonical form of a descriptor.
    Normalize(DescriptorArg),
    /// Report every diagnostic for a descriptor.
    Validate(DescriptorArg),
    /// Explain each non-default component and pattern clause.
    Explain(DescriptorArg),
    /// Map every embedding clause to its representation pattern.
    DeriveRepr(DescriptorArg),
    /// Compare two descriptors component by component.
    Diff { left: String, right: String },
    /// Unified Description Method documents.
    #[command(subcommand)]
    Udm(UdmCommand),
    /// Catalog of described methods (needs --store).
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Browse the pattern taxonomy.
    #[command(subcommand)]
    Taxonomy(TaxonomyCommand),
    /// Run the HTTP API and serve the web UI.
    Serve {
        /// Bind address; defaults to STEGOTAX_ADDR or 127.0.0.1:8080.
        #[arg(long)]
        addr: Option<String>,
        /// Directory with the built web UI; defaults to STEGOTAX_UI.
        #[arg(long)]
        ui: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct DescriptorArg {
    /// Descriptor text; read from stdin when omitted or `-`.
    descriptor: Option<String>,
}

#[derive(Debug, Subcommand)]
enum UdmCommand {
    /// Build a document from flags and print it as JSON.
    New(Box<NewDocument>),
    /// Validate a document file (`-` for stdin).
    Validate { file: Option<PathBuf> },
    /// Render a document file as labeled plain text.
    Render { file: Option<PathBuf> },
}

#[derive(Debug, Args)]
struct NewDocument {
    /// Method name.
    #[arg(long)]
    name: String,
    /// Embedding descriptor; repeat for several.
    #[arg(long = "embedding", required = true)]
    embedding: Vec<String>,
    /// Explicit representation descriptors; the marker is used when absent.
    #[arg(long = "representation")]
    representation: Vec<String>,
    /// Application scenario.
    #[arg(long, default_value = "")]
    scenario: String,
    /// Required cover property; repeatable.
    #[arg(long = "cover-property")]
    cover_properties: Vec<String>,
    #[arg(long, default_value = "")]
    robustness: String,
    /// Known countermeasure; repeatable.
    #[arg(long = "countermeasure")]
    countermeasures: Vec<String>,
    #[arg(long, default_value = "")]
    capacity: String,
    /// Channel-internal protocol.
    #[arg(long)]
    protocol: Option<String>,
    /// Reference or citation; repeatable.
    #[arg(long = "reference")]
    references: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum CatalogCommand {
    /// Add a document file and report duplicates.
    Add { file: Option<PathBuf> },
    /// Entries with an embedding pattern at or below a code.
    Find { prefix: String },
    /// Groups of entries with identical signatures.
    Dupes,
    /// All entries, oldest first.
    List,
    /// Remove an entry by id.
    Rm { id: String },
}

#[derive(Debug, Subcommand)]
enum TaxonomyCommand {
    /// One record, or every record when no code is given.
    Show { code: Option<String> },
    /// Every record below a code.
    Children { code: String },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    /// Exit 1 with a message; diagnostics were already reported.
    Invalid(String),
}

type Step = Result<i32, Failure>;

struct Ctx {
    format: Format,
    quiet: bool,
    taxonomy: Arc<Taxonomy>,
    taxonomy_path: Option<PathBuf>,
    store: Option<PathBuf>,
    stdin: String,
    out: String,
    err: String,
}

/// Whether the invocation takes its input from stdin, so callers only block
/// on stdin when it will be used.
pub fn reads_stdin<I, T>(argv: I) -> bool
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let Ok(cli) = Cli::try_parse_from(argv) else {
        return false;
    };
    let from_stdin = |p: &Option<PathBuf>| p.as_deref().is_none_or(|p| p == Path::new("-"));
    match &cli.command {
        Command::Parse(a)
        | Command::Normalize(a)
        | Command::Validate(a)
        | Command::Explain(a)
        | Command::DeriveRepr(a) => a.descriptor.as_deref().is_none_or(|d| d == "-"),
        Command::Udm(UdmCommand::Validate { file } | UdmCommand::Render { file }) => {
            from_stdin(file)
        }
        Command::Catalog(CatalogCommand::Add { file }) => from_stdin(file),
        _ => false,
    }
}

/// Runs the CLI. `argv[0]` is the program name; `stdin` is read by
/// subcommands whose input argument is omitted or `-`.
pub fn run<I, T>(argv: I, stdin: &str) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };

    let taxonomy = match stegotax_service::load_taxonomy(cli.taxonomy.as_deref()) {
        Ok(t) => Arc::new(t),
        Err(e) => {
            return Outcome {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    };
    let mut ctx = Ctx {
        format: cli.format,
        quiet: cli.quiet,
        taxonomy,
        taxonomy_path: cli.taxonomy,
        store: cli.store,
        stdin: stdin.to_string(),
        out: String::new(),
        err: String::new(),
    };
    let code = match ctx.dispatch(cli.command) {
        Ok(code) => code,
        Err(Failure::Usage(message)) => {
            let _ = writeln!(ctx.err, "error: {message}");
            EXIT_USAGE
        }
        Err(Failure::Invalid(message)) => {
            if !message.is_empty() {
                let _ = writeln!(ctx.err, "error: {message}");
            }
            EXIT_INVALID
        }
    };
    Outcome {
        code,
        stdout: ctx.out,
        stderr: ctx.err,
    }
}

impl Ctx {
    fn dispatch(&mut self, command: Command) -> Step {
        match command {
            Command::Parse(arg) => self.parse(arg),
            Command::Normalize(arg) => self.normalize(arg),
            Command::Validate(arg) => self.validate(arg),
            Command::Explain(arg) => self.explain(arg),
            Command::DeriveRepr(arg) => self.derive(arg),
            Command::Diff { left, right } => self.diff(&left, &right),
            Command::Udm(cmd) => self.udm(cmd),
            Command::Catalog(cmd) => self.catalog(cmd),
            Command::Taxonomy(cmd) => self.taxonomy(cmd),
            Command::Serve { addr, ui } => self.serve(addr, ui),
        }
    }

    fn json(&mut self, value: &impl Serialize) {
        self.out
            .push_str(&serde_json::to_string_pretty(value).expect("output serializes"));
        self.out.push('\n');
    }

    fn line(&mut self, text: impl AsRef<str>) {
        self.out.push_str(text.as_ref());
        self.out.push('\n');
    }

    fn report(&mut self, diagnostics: &[Diagnostic]) {
        for d in diagnostics {
            if d.is_error() || !self.quiet {
                let _ = writeln!(self.err, "{d}");
            }
        }
    }

    fn info(&mut self, text: impl AsRef<str>) {
        if !self.quiet {
            let _ = writeln!(self.err, "{}", text.as_ref());
        }
    }

    fn descriptor_text(&self, arg: &DescriptorArg) -> Result<String, Failure> {
        let text = match arg.descriptor.as_deref() {
            None | Some("-") => self.stdin.clone(),
            Some(text) => text.to_string(),
        };
        let text = text.trim().to_string();
        if text.is_empty() {
            return Err(Failure::Usage("empty descriptor".into()));
        }
        Ok(text)
    }

    fn read_input(&self, file: Option<&Path>) -> Result<String, Failure> {
        match file {
            None => Ok(self.stdin.clone()),
            Some(p) if p == Path::new("-") => Ok(self.stdin.clone()),
            Some(p) => std::fs::read_to_string(p)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display()))),
        }
    }

    /// Reports a descriptor failure in the chosen format and returns exit 1.
    fn descriptor_failure(&mut self, e: DescriptorError) -> Step {
        let diagnostics = e.diagnostics();
        match self.format {
            Format::Json => {
                self.json(&json!({ "error": e.code().as_str(), "diagnostics": diagnostics }))
            }
            Format::Text => self.report(&diagnostics),
        }
        Err(Failure::Invalid(String::new()))
    }

    fn parse(&mut self, arg: DescriptorArg) -> Step {
        let text = self.descriptor_text(&arg)?;
        let parsed = match descriptor::parse_with_diagnostics(&text, &self.taxonomy) {
            Ok(p) => p,
            Err(e) => return self.descriptor_failure(e),
        };
        let canonical = match descriptor::render_canonical(&parsed.descriptor, &self.taxonomy) {
            Ok(c) => c,
            Err(e) => return self.descriptor_failure(e),
        };
        match self.format {
            Format::Json => self.json(&json!({
                "descriptor": parsed.descriptor,
                "canonical": canonical,
                "warnings": parsed.warnings,
            })),
            Format::Text => {
                let d = &parsed.descriptor;
                self.line(format!("canonical:   {canonical}"));
                self.line(format!("locality:    {}", d.locality.canonical()));
                self.line(format!("directness:  {}", d.directness.canonical()));
                self.line(format!("activeness:  {}", d.activeness.canonical()));
                self.line(format!("level:       {}", d.level.canonical()));
                self.line(format!("temporality: {}", d.temporality.canonical()));
                for star in &d.star_properties {
                    self.line(format!("star:        {}", star.text));
                }
                for clause in &d.patterns {
                    let label = clause.label.map(|l| format!("({l}) ")).unwrap_or_default();
                    self.line(format!(
                        "pattern:     {label}{} {}",
                        clause.code, clause.name
                    ));
                }
                self.report(&parsed.warnings);
            }
        }
        Ok(EXIT_OK)
    }

    fn normalize(&mut self, arg: DescriptorArg) -> Step {
        let text = self.descriptor_text(&arg)?;
        match descriptor::normalize(&text, &self.taxonomy) {
            Ok(canonical) => {
                match self.format {
                    Format::Json => self.json(&json!({ "canonical": canonical })),
                    Format::Text => self.line(canonical),
                }
                Ok(EXIT_OK)
            }
            Err(e) => self.descriptor_failure(e),
        }
    }

    fn validate(&mut self, arg: DescriptorArg) -> Step {
        let text = self.descriptor_text(&arg)?;
        let diagnostics = descriptor::check(&text, &self.taxonomy);
        let valid = !has_errors(&diagnostics);
        match self.format {
            Format::Json => self.json(&json!({ "valid": valid, "diagnostics": diagnostics })),
            Format::Text => {
                self.report(&diagnostics);
                if valid {
                    self.line("valid");
                }
            }
        }
        Ok(if valid { EXIT_OK } else { EXIT_INVALID })
    }

    fn explain(&mut self, arg: DescriptorArg) -> Step {
        let text = self.descriptor_text(&arg)?;
        let result = descriptor::parse_descriptor(&text, &self.taxonomy).and_then(|d| {
            Ok((
                descriptor::render_canonical(&d, &self.taxonomy)?,
                descriptor::explain(&d, &self.taxonomy)?,
            ))
        });
        let (canonical, entries) = match result {
            Ok(r) => r,
            Err(e) => return self.descriptor_failure(e),
        };
        match self.format {
            Format::Json => self.json(&json!({ "canonical": canonical, "entries": entries })),
            Format::Text => {
                self.line(&canonical);
                for entry in entries {
                    self.line(format!("\n{}: {}", entry.attribute, entry.value));
                    self.line(format!("    {}", entry.description));
                }
            }
        }
        Ok(EXIT_OK)
    }

    fn derive(&mut self, arg: DescriptorArg) -> Step {
        let text = self.descriptor_text(&arg)?;
        let result = descriptor::parse_descriptor(&text, &self.taxonomy).and_then(|d| {
            let derived = descriptor::derive_representation(&d, &self.taxonomy)?;
            Ok((
                descriptor::render_canonical(&derived, &self.taxonomy)?,
                derived,
            ))
        });
        match result {
            Ok((canonical, derived)) => {
                match self.format {
                    Format::Json => {
                        self.json(&json!({ "canonical": canonical, "descriptor": derived }))
                    }
                    Format::Text => self.line(canonical),
                }
                Ok(EXIT_OK)
            }
            Err(e) => self.descriptor_failure(e),
        }
    }

    fn diff(&mut self, left: &str, right: &str) -> Step {
        if left.trim().is_empty() || right.trim().is_empty() {
            return Err(Failure::Usage("empty descriptor".into()));
        }
        let parsed = descriptor::parse_descriptor(left, &self.taxonomy)
            .and_then(|l| Ok((l, descriptor::parse_descriptor(right, &self.taxonomy)?)));
        let (l, r) = match parsed {
            Ok(pair) => pair,
            Err(e) => return self.descriptor_failure(e),
        };
        let differences = descriptor::diff(&l, &r);
        match self.format {
            Format::Json => self.json(&json!({ "differences": differences })),
            Format::Text if differences.is_empty() => self.line("no differences"),
            Format::Text => {
                for d in differences {
                    let component =
                        serde_json::to_value(d.component).expect("component serializes");
                    self.line(format!(
                        "{}: {} | {}",
                        component.as_str().unwrap_or_default(),
                        d.left,
                        d.right
                    ));
                }
            }
        }
        Ok(EXIT_OK)
    }

    fn load_document(&mut self, file: Option<&Path>) -> Result<UdmDocument, Failure> {
        let text = self.read_input(file)?;
        if text.trim().is_empty() {
            return Err(Failure::Usage("empty document".into()));
        }
        udm::deserialize_udm(&text).map_err(|e| match e {
            UdmError::ParseError(_) => Failure::Usage(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        })
    }

    fn udm_report(&mut self, doc: &UdmDocument) -> Step {
        let diagnostics = udm::validate_udm(doc, &self.taxonomy);
        let valid = !has_errors(&diagnostics);
        let representation = valid
            .then(|| udm::resolve_representation(doc, &self.taxonomy).ok())
            .flatten();
        let signature = valid
            .then(|| udm::signature(doc, &self.taxonomy).ok())
            .flatten();
        match self.format {
            Format::Json => self.json(&json!({
                "valid": valid,
                "diagnostics": diagnostics,
                "representation": representation,
                "signature": signature,
            })),
            Format::Text => {
                self.report(&diagnostics);
                if valid {
                    self.line("valid");
                    for r in representation.unwrap_or_default() {
                        self.line(format!("representation: {r}"));
                    }
                }
            }
        }
        Ok(if valid { EXIT_OK } else { EXIT_INVALID })
    }

    fn udm(&mut self, cmd: UdmCommand) -> Step {
        match cmd {
            UdmCommand::New(args) => {
                let NewDocument {
                    name,
                    embedding,
                    representation,
                    scenario,
                    cover_properties,
                    robustness,
                    countermeasures,
                    capacity,
                    protocol,
                    references,
                } = *args;
                if name.trim().is_empty() {
                    return Err(Failure::Usage("--name must not be empty".into()));
                }
                let mut doc = UdmDocument::new(name, embedding);
                if !representation.is_empty() {
                    doc.representation_patterns = RepresentationPatterns::Explicit(representation);
                }
                doc.application_scenario = scenario;
                doc.required_cover_properties = cover_properties;
                doc.channel_properties.robustness = robustness;
                doc.channel_properties.countermeasures = countermeasures;
                doc.channel_properties.capacity = capacity;
                doc.channel_internal_protocol = protocol;
                doc.references = references;
                match udm::normalize_udm(&doc, &self.taxonomy) {
                    Ok(doc) => {
                        self.line(udm::serialize_udm(&doc));
                        Ok(EXIT_OK)
                    }
                    Err(UdmError::ValidationFailed(diagnostics)) => {
                        match self.format {
                            Format::Json => {
                                self.json(&json!({ "valid": false, "diagnostics": diagnostics }))
                            }
                            Format::Text => self.report(&diagnostics),
                        }
                        Err(Failure::Invalid(String::new()))
                    }
                    Err(e) => Err(Failure::Invalid(e.to_string())),
                }
            }
            UdmCommand::Validate { file } => {
                let doc = self.load_document(file.as_deref())?;
                self.udm_report(&doc)
            }
            UdmCommand::Render { file } => {
                let doc = self.load_document(file.as_deref())?;
                let text = udm::render_text(&doc);
                match self.format {
                    Format::Json => self.json(&json!({ "document": doc, "text": text })),
                    Format::Text => self.out.push_str(&text),
                }
                Ok(EXIT_OK)
            }
        }
    }

    fn store(&self) -> Result<PathBuf, Failure> {
        self.store.clone().ok_or_else(|| {
            Failure::Usage("catalog commands need --store <dir> or STEGOTAX_STORE".into())
        })
    }

    fn catalog_failure(&mut self, e: CatalogError) -> Failure {
        match e {
            CatalogError::ValidationFailed(diagnostics) => {
                match self.format {
                    Format::Json => self
                        .json(&json!({ "error": "ValidationFailed", "diagnostics": diagnostics })),
                    Format::Text => self.report(&diagnostics),
                }
                Failure::Invalid(String::new())
            }
            e @ CatalogError::NotFound(_) => Failure::Invalid(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }

    fn entries(&mut self, entries: Vec<&CatalogEntry>) {
        match self.format {
            Format::Json => self.json(&json!({ "entries": entries })),
            Format::Text => {
                for e in entries {
                    let first = e
                        .document
                        .embedding_patterns
                        .first()
                        .map(String::as_str)
                        .unwrap_or_default();
                    self.line(format!("{}\t{}\t{}", e.id, e.document.method_name, first));
                }
            }
        }
    }

    fn catalog(&mut self, cmd: CatalogCommand) -> Step {
        let store = self.store()?;
        let mut catalog =
            Catalog::open(&store, self.taxonomy.clone()).map_err(|e| self.catalog_failure(e))?;
        match cmd {
            CatalogCommand::Add { file } => {
                let doc = self.load_document(file.as_deref())?;
                let outcome = catalog.add(doc).map_err(|e| self.catalog_failure(e))?;
                catalog
                    .persist(&store)
                    .map_err(|e| self.catalog_failure(e))?;
                match self.format {
                    Format::Json => self.json(&outcome),
                    Format::Text => {
                        self.line(&outcome.entry.id);
                        for dup in &outcome.duplicates {
                            self.info(format!("warning: same signature as existing entry {dup}"));
                        }
                    }
                }
            }
            CatalogCommand::Find { prefix } => {
                let code: PatternCode = prefix
                    .parse()
                    .map_err(|e| Failure::Invalid(format!("{e}")))?;
                self.entries(catalog.find_by_prefix(&code));
            }
            CatalogCommand::Dupes => {
                let groups = catalog.find_duplicates();
                match self.format {
                    Format::Json => self.json(&json!({ "groups": groups })),
                    Format::Text => {
                        for group in groups {
                            self.line(group.join(" "));
                        }
                    }
                }
            }
            CatalogCommand::List => self.entries(catalog.list_entries()),
            CatalogCommand::Rm { id } => {
                let removed = catalog.remove(&id).map_err(|e| self.catalog_failure(e))?;
                catalog
                    .persist(&store)
                    .map_err(|e| self.catalog_failure(e))?;
                match self.format {
                    Format::Json => self.json(&json!({ "removed": removed })),
                    Format::Text => self.line(format!("removed {}", removed.id)),
                }
            }
        }
        Ok(EXIT_OK)
    }

    fn records(&mut self, records: Vec<&PatternRecord>) {
        match self.format {
            Format::Json => {
                self.json(&json!({ "version": self.taxonomy.version(), "patterns": records }))
            }
            Format::Text => {
                for r in records {
                    self.line(format!("{}\t{}", r.code, r.name));
                }
            }
        }
    }

    fn taxonomy(&mut self, cmd: TaxonomyCommand) -> Step {
        let taxonomy = self.taxonomy.clone();
        let lookup = |text: &str| -> Result<&PatternRecord, Failure> {
            let code: PatternCode = text.parse().map_err(|e| Failure::Invalid(format!("{e}")))?;
            taxonomy
                .lookup(&code)
                .map_err(|e| Failure::Invalid(e.to_string()))
        };
        match cmd {
            TaxonomyCommand::Show { code: None } => self.records(taxonomy.iter().collect()),
            TaxonomyCommand::Show { code: Some(code) } => {
                let record = lookup(&code)?;
                match self.format {
                    Format::Json => self.json(record),
                    Format::Text => {
                        self.line(format!("{} {}", record.code, record.name));
                        if let Some(parent) = &record.parent {
                            self.line(format!("parent: {parent}"));
                        }
                        self.line(format!("domain: {}", record.domain_label));
                        self.line(&record.description);
                    }
                }
            }
            TaxonomyCommand::Children { code } => {
                let record = lookup(&code)?;
                self.records(taxonomy.children(&record.code));
            }
        }
        Ok(EXIT_OK)
    }

    fn serve(&mut self, addr: Option<String>, ui: Option<PathBuf>) -> Step {
        let mut config = ServiceConfig::from_env().map_err(|e| Failure::Usage(e.to_string()))?;
        if let Some(addr) = addr {
            config.addr = Some(
                addr.parse()
                    .map_err(|_| Failure::Usage(format!("invalid address {addr:?}")))?,
            );
        }
        config.ui_dir = ui.or(config.ui_dir);
        config.store_path = self.store.clone().or(config.store_path);
        config.taxonomy_path = self.taxonomy_path.clone();
        let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Usage(e.to_string()))?;
        runtime
            .block_on(stegotax_service::serve(config))
            .map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(EXIT_OK)
    }
}
