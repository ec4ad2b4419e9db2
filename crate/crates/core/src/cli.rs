//! Command-line entry point. Each subcommand reads its inputs, calls the
//! owning module and writes that module's output format.

use std::collections::HashMap;
use std::fmt::Display;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};

use crate::corpus::io::{
    list_document_store, read_candidates_csv, read_labeled_csv, read_metadata_csv, read_text,
    write_candidates_csv, write_metadata_csv,
};
use crate::corpus::{
    extract_regulatory_section, filter_document, stratify_sample, MarkerDictionary,
    MetadataClient, Segmenter, DEFAULT_ENDPOINT,
};
use crate::explain::{
    aggregate_influential, explain_sentence, position_stats, write_influential_csv,
    write_positions_csv, ExplainConfig, ItemOutcome,
};
use crate::metrics::{align_predictions, compare_models};
use crate::parse::{load_lexicon, read_conllu, AgentLexicon, DeprelScheme, ParsedSentence};
use crate::ruleclf::{
    classify_hybrid_batch, classify_rule, write_outcomes_csv, Classifier, DelegationPolicy,
    OutcomeRow, PredictionTable, SubprocessClassifier,
};
use crate::{Label, RuleProfile};

#[derive(Parser)]
#[command(name = "lexrule", version, about = "Regulatory sentence extraction, classification and explanation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cut the enacting terms out of every document in a store.
    Extract(ExtractArgs),
    /// Segment sections and keep sentences containing shall/must.
    Sentences(SentencesArgs),
    /// Draw an equal-allocation sample per (year, policy area).
    Sample(SampleArgs),
    /// Apply the dependency rules (optionally with a fallback) to parses.
    Classify(ClassifyArgs),
    /// Score prediction files against gold labels.
    Evaluate(EvaluateArgs),
    /// Explain a classifier's decisions by token masking.
    Explain(ExplainArgs),
    /// Look up year, policy area and legal form of documents.
    FetchMetadata(FetchArgs),
}

#[derive(Args)]
struct ExtractArgs {
    /// Directory of `<celex_id>.txt` documents.
    #[arg(long)]
    docs: PathBuf,
    /// Output directory for `<celex_id>.txt` sections.
    #[arg(long)]
    out: PathBuf,
    /// Marker dictionary; the built-in one when omitted.
    #[arg(long)]
    markers: Option<PathBuf>,
}

#[derive(Args)]
struct SentencesArgs {
    /// Directory of `<celex_id>.txt` sections.
    #[arg(long)]
    sections: PathBuf,
    /// Candidate CSV to write.
    #[arg(long)]
    out: PathBuf,
    /// Abbreviation list; the built-in one when omitted.
    #[arg(long)]
    abbreviations: Option<PathBuf>,
    /// Treat `;` as an ordinary character.
    #[arg(long)]
    no_semicolon_split: bool,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    candidates: PathBuf,
    /// Metadata CSV (`celex_id,adoption_year,policy_area,legal_form`).
    #[arg(long)]
    metadata: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    per_stratum: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    conllu: PathBuf,
    /// Agent lexicon; the built-in one when neither this nor the
    /// environment variable is set.
    #[arg(long, env = "LEXRULE_LEXICON")]
    lexicon: Option<PathBuf>,
    #[arg(long, default_value = "paper-v1")]
    profile: RuleProfile,
    /// Scheme for files without a `# scheme =` comment.
    #[arg(long, default_value = "ud_v2")]
    deprel_scheme: DeprelScheme,
    /// Outcome CSV to write.
    #[arg(long)]
    out: PathBuf,
    /// Full outcomes with rationales, one JSON object per line.
    #[arg(long)]
    rationales: Option<PathBuf>,
    /// Hand rule failures to a fallback classifier.
    #[arg(long)]
    hybrid: bool,
    /// Fallback program speaking the line protocol.
    #[arg(long, requires = "hybrid", conflicts_with = "fallback_predictions")]
    fallback_cmd: Option<String>,
    /// Argument for the fallback program; repeatable.
    #[arg(long, requires = "fallback_cmd", allow_hyphen_values = true)]
    fallback_arg: Vec<String>,
    /// Prediction CSV used as the fallback.
    #[arg(long, requires = "hybrid")]
    fallback_predictions: Option<PathBuf>,
    /// Delegate every attribute-stage failure.
    #[arg(long, requires = "hybrid")]
    delegate_always: bool,
    /// Seconds to wait for each fallback response.
    #[arg(long, default_value_t = 30)]
    timeout_secs: u64,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Gold CSV (`sentence,label`).
    #[arg(long)]
    gold: PathBuf,
    /// Prediction CSV (`sentence,score`); repeatable. Models are named by
    /// file stem.
    #[arg(long = "pred", required = true)]
    preds: Vec<PathBuf>,
    /// Full report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct ExplainArgs {
    /// Labelled CSV (`sentence,label`) of sentences to explain.
    #[arg(long)]
    sentences: PathBuf,
    /// Classifier program speaking the line protocol.
    #[arg(long)]
    classifier_cmd: String,
    /// Argument for the classifier program; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    classifier_arg: Vec<String>,
    #[arg(long, default_value_t = 1000)]
    n_samples: usize,
    #[arg(long, default_value_t = 0.5)]
    keep_prob: f64,
    #[arg(long, default_value_t = 1)]
    ngram: usize,
    #[arg(long)]
    seed: u64,
    /// Tokens per sentence counted as most influential.
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Drop aggregate tokens seen fewer times than this.
    #[arg(long, default_value_t = 5)]
    min_freq: usize,
    /// Threads scoring each perturbation batch.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, default_value_t = 30)]
    timeout_secs: u64,
    /// Directory for explanations.jsonl, influential.csv and positions.csv.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct FetchArgs {
    /// Document store whose file stems are the ids to look up.
    #[arg(long, required_unless_present = "ids")]
    docs: Option<PathBuf>,
    /// File with one CELEX id per line.
    #[arg(long, conflicts_with = "docs")]
    ids: Option<PathBuf>,
    #[arg(long, default_value = DEFAULT_ENDPOINT)]
    endpoint: String,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Usage(String),
    Data(String),
}

type CliResult = Result<(), Failure>;

fn data<E: Display>(context: impl Display) -> impl FnOnce(E) -> Failure {
    move |e| Failure::Data(format!("{context}: {e}"))
}

fn require_file(flag: &str, path: &Path) -> CliResult {
    if path.is_file() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("{flag}: no such file {}", path.display())))
    }
}

fn require_dir(flag: &str, path: &Path) -> CliResult {
    if path.is_dir() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("{flag}: no such directory {}", path.display())))
    }
}

fn create_dir(path: &Path) -> CliResult {
    std::fs::create_dir_all(path).map_err(data(path.display()))
}

/// Parses `argv` (program name first) and runs the subcommand. Returns 0 on
/// success, 1 on a data error and 2 on a usage error.
pub fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let started = Instant::now();
    let result = match cli.command {
        Command::Extract(a) => extract(a),
        Command::Sentences(a) => sentences(a),
        Command::Sample(a) => sample(a),
        Command::Classify(a) => classify(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Explain(a) => explain(a),
        Command::FetchMetadata(a) => fetch(a),
    };
    log::info!("finished in {:.2?}", started.elapsed());
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Failure::Data(m)) => {
            eprintln!("error: {m}");
            1
        }
    }
}

fn extract(a: ExtractArgs) -> CliResult {
    require_dir("--docs", &a.docs)?;
    let markers = match &a.markers {
        Some(p) => {
            require_file("--markers", p)?;
            MarkerDictionary::load(p).map_err(data(p.display()))?
        }
        None => MarkerDictionary::builtin(),
    };
    let docs = list_document_store(&a.docs).map_err(data(a.docs.display()))?;
    create_dir(&a.out)?;
    let mut written = 0usize;
    for (id, path) in &docs {
        let text = read_text(path).map_err(data(path.display()))?;
        match extract_regulatory_section(&text, &markers) {
            Ok(section) => {
                let target = a.out.join(format!("{id}.txt"));
                crate::fsutil::write_atomic(&target, section.as_bytes())
                    .map_err(data(target.display()))?;
                written += 1;
            }
            Err(e) => log::warn!("{}: {e}; skipped", path.display()),
        }
    }
    eprintln!("extracted {written} of {} documents", docs.len());
    Ok(())
}

fn sentences(a: SentencesArgs) -> CliResult {
    require_dir("--sections", &a.sections)?;
    let segmenter = match &a.abbreviations {
        Some(p) => {
            require_file("--abbreviations", p)?;
            Segmenter::load(p).map_err(data(p.display()))?
        }
        None => Segmenter::default(),
    }
    .semicolons(!a.no_semicolon_split);
    let mut candidates = Vec::new();
    for (id, path) in list_document_store(&a.sections).map_err(data(a.sections.display()))? {
        let text = read_text(&path).map_err(data(path.display()))?;
        candidates.extend(filter_document(&id, &segmenter.segment(&text)));
    }
    write_candidates_csv(&a.out, &candidates).map_err(data(a.out.display()))?;
    eprintln!("{} candidate sentences", candidates.len());
    Ok(())
}

fn sample(a: SampleArgs) -> CliResult {
    require_file("--candidates", &a.candidates)?;
    require_file("--metadata", &a.metadata)?;
    let candidates = read_candidates_csv(&a.candidates).map_err(data(a.candidates.display()))?;
    let metadata: HashMap<String, (i32, String)> = read_metadata_csv(&a.metadata)
        .map_err(data(a.metadata.display()))?
        .into_iter()
        .map(|m| (m.celex_id, (m.adoption_year, m.policy_area)))
        .collect();
    let drawn = stratify_sample(&candidates, &metadata, a.per_stratum as usize, a.seed);
    write_candidates_csv(&a.out, &drawn).map_err(data(a.out.display()))?;
    eprintln!("sampled {} sentences", drawn.len());
    Ok(())
}

fn load_parses(path: &Path, scheme: DeprelScheme) -> Result<Vec<ParsedSentence>, Failure> {
    let file = File::open(path).map_err(data(path.display()))?;
    read_conllu(BufReader::new(file), scheme).map_err(data(path.display()))
}

fn lexicon_from(path: Option<&Path>) -> Result<AgentLexicon, Failure> {
    match path {
        Some(p) => {
            require_file("--lexicon", p)?;
            let (lexicon, n) = load_lexicon(p).map_err(data(p.display()))?;
            log::info!("loaded {n} agent lexicon entries from {}", p.display());
            Ok(lexicon)
        }
        None => {
            log::info!("using the built-in agent lexicon");
            Ok(AgentLexicon::builtin())
        }
    }
}

fn spawn(program: &str, args: &[String], timeout_secs: u64) -> Result<SubprocessClassifier, Failure> {
    let mut command = vec![program.to_owned()];
    command.extend(args.iter().cloned());
    SubprocessClassifier::spawn_with_timeout(&command, Duration::from_secs(timeout_secs))
        .map_err(data(program))
}

fn classify(a: ClassifyArgs) -> CliResult {
    require_file("--conllu", &a.conllu)?;
    let lexicon = lexicon_from(a.lexicon.as_deref())?;
    let parses = load_parses(&a.conllu, a.deprel_scheme)?;
    let outcomes = if a.hybrid {
        let fallback: Box<dyn Classifier> = match (&a.fallback_cmd, &a.fallback_predictions) {
            (Some(cmd), None) => Box::new(spawn(cmd, &a.fallback_arg, a.timeout_secs)?),
            (None, Some(p)) => {
                require_file("--fallback-predictions", p)?;
                Box::new(PredictionTable::load(p).map_err(data(p.display()))?)
            }
            _ => {
                return Err(Failure::Usage(
                    "--hybrid needs one of --fallback-cmd or --fallback-predictions".into(),
                ))
            }
        };
        let policy = if a.delegate_always {
            DelegationPolicy::Always
        } else {
            DelegationPolicy::ProperNounLike
        };
        classify_hybrid_batch(&parses, &lexicon, a.profile, fallback.as_ref(), policy)
            .map_err(data("fallback classifier"))?
    } else {
        parses.iter().map(|p| classify_rule(p, &lexicon, a.profile)).collect()
    };
    let rows: Vec<OutcomeRow<'_>> = parses
        .iter()
        .zip(&outcomes)
        .map(|(p, o)| OutcomeRow::new(&p.text, o))
        .collect();
    write_outcomes_csv(&a.out, &rows).map_err(data(a.out.display()))?;
    if let Some(path) = &a.rationales {
        let mut buf = Vec::new();
        for (p, o) in parses.iter().zip(&outcomes) {
            let line = serde_json::json!({ "sentence": p.text, "outcome": o });
            serde_json::to_writer(&mut buf, &line).map_err(data(path.display()))?;
            buf.push(b'\n');
        }
        crate::fsutil::write_atomic(path, &buf).map_err(data(path.display()))?;
    }
    let regulatory = outcomes.iter().filter(|o| o.label == Label::Regulatory).count();
    eprintln!("classified {} sentences, {regulatory} regulatory", outcomes.len());
    Ok(())
}

fn evaluate(a: EvaluateArgs) -> CliResult {
    require_file("--gold", &a.gold)?;
    let gold = read_labeled_csv(&a.gold).map_err(data(a.gold.display()))?;
    let mut tables = Vec::new();
    for p in &a.preds {
        require_file("--pred", p)?;
        tables.push(PredictionTable::load(p).map_err(data(p.display()))?);
    }
    let aligned = align_predictions(&gold, &tables).map_err(data("join"))?;
    let report = compare_models(&aligned.gold, &aligned.preds, Some(&aligned.sentences))
        .map_err(data("metrics"))?;
    print!("{}", report.to_table());
    if let Some(path) = &a.json {
        let bytes = serde_json::to_vec_pretty(&report).map_err(data(path.display()))?;
        crate::fsutil::write_atomic(path, &bytes).map_err(data(path.display()))?;
    }
    Ok(())
}

fn explain(a: ExplainArgs) -> CliResult {
    require_file("--sentences", &a.sentences)?;
    let cfg = ExplainConfig {
        n_samples: a.n_samples,
        keep_probability: a.keep_prob,
        ngram: a.ngram,
        seed: a.seed,
        threads: a.threads,
        ..ExplainConfig::default()
    };
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let items = read_labeled_csv(&a.sentences).map_err(data(a.sentences.display()))?;
    let classifier = spawn(&a.classifier_cmd, &a.classifier_arg, a.timeout_secs)?;
    let mut expls = Vec::with_capacity(items.len());
    let mut outcomes = Vec::with_capacity(items.len());
    let mut jsonl = Vec::new();
    for (i, item) in items.iter().enumerate() {
        let e = explain_sentence(&item.text, &classifier, &cfg)
            .map_err(data(format!("{} line {}", a.sentences.display(), i + 2)))?;
        serde_json::to_writer(&mut jsonl, &e).map_err(data("explanations.jsonl"))?;
        jsonl.push(b'\n');
        outcomes.push(ItemOutcome::new(item.label, Label::from_score(e.base_score)));
        expls.push(e);
        if (i + 1) % 50 == 0 {
            eprintln!("explained {}/{}", i + 1, items.len());
        }
    }
    let influential =
        aggregate_influential(&expls, &outcomes, a.k, a.min_freq).map_err(data("aggregate"))?;
    let positions = position_stats(&expls, &outcomes, a.k).map_err(data("aggregate"))?;
    create_dir(&a.out_dir)?;
    let target = a.out_dir.join("explanations.jsonl");
    crate::fsutil::write_atomic(&target, &jsonl).map_err(data(target.display()))?;
    let target = a.out_dir.join("influential.csv");
    write_influential_csv(&target, &influential).map_err(data(target.display()))?;
    let target = a.out_dir.join("positions.csv");
    write_positions_csv(&target, &positions).map_err(data(target.display()))?;
    eprintln!("explained {} sentences", expls.len());
    Ok(())
}

fn fetch(a: FetchArgs) -> CliResult {
    let ids: Vec<String> = match (&a.docs, &a.ids) {
        (Some(dir), _) => {
            require_dir("--docs", dir)?;
            list_document_store(dir)
                .map_err(data(dir.display()))?
                .into_iter()
                .map(|(id, _)| id)
                .collect()
        }
        (None, Some(p)) => {
            require_file("--ids", p)?;
            crate::text::read_phrase_list(&read_text(p).map_err(data(p.display()))?)
        }
        (None, None) => return Err(Failure::Usage("one of --docs or --ids is required".into())),
    };
    let client = MetadataClient::new(&a.endpoint).map_err(|e| Failure::Usage(format!("--endpoint: {e}")))?;
    let fetched = client.fetch(&ids).map_err(data(&a.endpoint))?;
    for (id, reason) in &fetched.unresolved {
        log::warn!("{id}: {reason}");
    }
    write_metadata_csv(&a.out, &fetched.records).map_err(data(a.out.display()))?;
    eprintln!(
        "resolved {} of {} documents",
        fetched.records.len(),
        ids.len()
    );
    Ok(())
}
