use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use serde_json::{json, Value};

use lgkappa::decide::{
    build_test_semigroup5, build_test_semigroup6, decide, replay_certificate, Certificate,
    IdentityProblem, Variety,
};
use lgkappa::formats::{self, cayley_csv, export, CayleyExport, FValue};
use lgkappa::groups::FiniteGroup;
use lgkappa::kappa::{canonicalize_rank1, evaluate, random_rank1_term, Rank1Form, Term};
use lgkappa::langdecomp::FactorialLanguage;
use lgkappa::localgroups::{
    is_local_group, rees_quotient_is_nilpotent, GFunction, LocalGroup, SemigroupView,
    TableSemigroup,
};
use lgkappa::words::{Alphabet, Word};

#[derive(Parser)]
#[command(
    name = "lgkappa",
    version,
    about = "Local groups S(G,L,f) and rank-1 kappa-identities"
)]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical form of a rank-1 term, with its rewrite trace.
    Canon {
        term: String,
        /// Letter order, e.g. "ba". Defaults to the natural order of the letters used.
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long)]
        trace: bool,
    },
    /// Decide whether LG (or S) satisfies pi = rho.
    Decide {
        pi: String,
        rho: String,
        #[arg(long, default_value = "lg", value_parser = ["lg", "s"])]
        variety: String,
        #[arg(long)]
        alphabet: Option<String>,
        /// Write the certificate as JSON.
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// Also build the k-superposition separation.
        #[arg(long)]
        alt: bool,
    },
    /// Re-check a certificate written by `decide`.
    Replay { certificate: PathBuf },
    /// Evaluate a term in a semigroup.
    Eval {
        term: String,
        #[command(flatten)]
        sgp: SgpArgs,
        /// Letter assignments such as `a=g` or `b=(a, g, a)`.
        #[arg(long = "assign", value_name = "LETTER=ELEMENT")]
        assign: Vec<String>,
    },
    /// Coordinate sequence of a word.
    Sc {
        #[arg(long)]
        lang: PathBuf,
        word: String,
    },
    /// Boundary of a factorial language.
    Boundary {
        #[arg(long)]
        lang: PathBuf,
    },
    /// Build S(G,L,f) and list its elements.
    Build {
        #[command(flatten)]
        input: LocalArgs,
        /// Print the Cayley table.
        #[arg(long, value_parser = ["csv", "json"])]
        table: Option<String>,
    },
    /// Presentation of S(G,L,f) by generators and relations.
    Presentation {
        #[command(flatten)]
        input: LocalArgs,
        /// Check every relation under evaluation.
        #[arg(long)]
        verify: bool,
    },
    /// Test whether a finite semigroup is a local group.
    CheckLocalGroup {
        #[command(flatten)]
        sgp: SgpArgs,
    },
    /// Decide random pairs and cross-check both separations.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}

#[derive(Args)]
struct LocalArgs {
    #[arg(long)]
    lang: PathBuf,
    #[arg(long)]
    group: PathBuf,
    /// Values of f; unlisted words go to the identity.
    #[arg(long)]
    f: Option<PathBuf>,
}

#[derive(Args)]
struct SgpArgs {
    /// One of C2, C6, Sym3, T3, S1.
    #[arg(long, conflicts_with_all = ["lang", "group", "f", "table"])]
    builtin: Option<String>,
    #[arg(long, requires = "group")]
    lang: Option<PathBuf>,
    #[arg(long)]
    group: Option<PathBuf>,
    #[arg(long, requires = "lang")]
    f: Option<PathBuf>,
    /// Cayley table as written by `build --table json`.
    #[arg(long, conflicts_with_all = ["lang", "group", "f"])]
    table: Option<PathBuf>,
}

enum Sgp {
    Table(TableSemigroup),
    Local(Box<LocalGroup<GFunction>>),
}

fn s1() -> Result<LocalGroup<GFunction>> {
    let lang = FactorialLanguage::bounded(Alphabet::parse("a")?, 1)?;
    let group = FiniteGroup::cyclic(2);
    let g = group.parse_element("g")?;
    let f = GFunction::from_values(lang, group, [(Word::parse("aa")?, g)])?;
    Ok(LocalGroup::new(f))
}

fn load_local(
    lang: &Path,
    group: &Path,
    f: Option<&Path>,
) -> Result<(LocalGroup<GFunction>, Vec<Word>)> {
    let (lang, added) =
        formats::load_language(lang).with_context(|| format!("reading {}", lang.display()))?;
    let group =
        formats::load_group(group).with_context(|| format!("reading {}", group.display()))?;
    let values: Vec<FValue> = match f {
        Some(p) => formats::read_json(p).with_context(|| format!("reading {}", p.display()))?,
        None => Vec::new(),
    };
    Ok((
        LocalGroup::new(formats::load_gfunction(lang, group, &values)?),
        added,
    ))
}

impl SgpArgs {
    fn load(&self) -> Result<Sgp> {
        if let Some(name) = &self.builtin {
            return Ok(match name.as_str() {
                "C2" => Sgp::Table(TableSemigroup::of_group(&FiniteGroup::cyclic(2))?),
                "C6" => Sgp::Table(TableSemigroup::of_group(&FiniteGroup::cyclic(6))?),
                "Sym3" => Sgp::Table(TableSemigroup::of_group(&FiniteGroup::symmetric(3))?),
                "T3" => Sgp::Table(TableSemigroup::full_transformations(3)),
                "S1" => Sgp::Local(Box::new(s1()?)),
                other => bail!("unknown builtin '{other}' (expected C2, C6, Sym3, T3 or S1)"),
            });
        }
        if let Some(p) = &self.table {
            let ex: CayleyExport =
                formats::read_json(p).with_context(|| format!("reading {}", p.display()))?;
            let table = ex
                .table
                .ok_or_else(|| anyhow!("{} has no table", p.display()))?;
            return Ok(Sgp::Table(TableSemigroup::new(ex.elements, table)?));
        }
        match (&self.lang, &self.group) {
            (Some(l), Some(g)) => Ok(Sgp::Local(Box::new(load_local(l, g, self.f.as_deref())?.0))),
            (None, Some(g)) => {
                let group =
                    formats::load_group(g).with_context(|| format!("reading {}", g.display()))?;
                Ok(Sgp::Table(TableSemigroup::of_group(&group)?))
            }
            _ => {
                bail!("no semigroup given: use --builtin, --table, --group, or --lang with --group")
            }
        }
    }
}

fn parse_term(text: &str) -> Result<Term> {
    Term::parse(text).with_context(|| format!("cannot parse '{text}'"))
}

fn alphabet_for(given: Option<&str>, terms: &[&Term]) -> Result<Alphabet> {
    match given {
        Some(a) => {
            let alphabet = Alphabet::parse(a)?;
            for t in terms {
                alphabet.check_word(&t.letters())?;
            }
            Ok(alphabet)
        }
        None => Ok(Alphabet::natural(terms.iter().flat_map(|t| t.letters()))?),
    }
}

fn parse_word(text: &str) -> Result<Word> {
    Ok(Word::parse(text)?)
}

fn print(json_mode: bool, value: Value, text: impl FnOnce() -> String) {
    if json_mode {
        println!(
            "{}",
            serde_json::to_string_pretty(&value).expect("serializable")
        );
    } else {
        print!("{}", text());
    }
}

fn canon(term: &str, alphabet: Option<&str>, trace: bool, json_mode: bool) -> Result<()> {
    let t = parse_term(term)?;
    let alphabet = alphabet_for(alphabet, &[&t])?;
    let (c, tr) = canonicalize_rank1(&t, &alphabet)?;
    let steps: Vec<Value> = tr
        .steps
        .iter()
        .map(|s| json!({"kind": s.kind, "before": s.before.to_string(), "after": s.after.to_string()}))
        .collect();
    print(
        json_mode,
        json!({"term": t.to_string(), "canonical": c.to_string(), "trace": steps}),
        || {
            let mut out = format!("{c}\n");
            if trace {
                for s in &tr.steps {
                    out.push_str(&format!("  {:?}: {} -> {}\n", s.kind, s.before, s.after));
                }
            }
            out
        },
    );
    Ok(())
}

fn run_decide(
    pi: &str,
    rho: &str,
    variety: &str,
    alphabet: Option<&str>,
    certificate: Option<&Path>,
    alt: bool,
    json_mode: bool,
) -> Result<()> {
    let (p, r) = (parse_term(pi)?, parse_term(rho)?);
    let alphabet = alphabet_for(alphabet, &[&p, &r])?;
    let variety = if variety == "s" {
        Variety::S
    } else {
        Variety::Lg
    };
    let (equal, cert) = decide(&p, &r, &alphabet, variety, alt)?;
    if let Some(path) = certificate {
        fs::write(path, serde_json::to_string_pretty(&cert)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    print(json_mode, serde_json::to_value(&cert)?, || {
        let mut out = format!(
            "canonical pi:  {}\ncanonical rho: {}\nequal: {equal}\n",
            cert.canonical_pi, cert.canonical_rho
        );
        if let Some(p) = &cert.params {
            out.push_str(&format!(
                "parameters: i={} j={} k={} k'={}\n",
                p.i, p.j, p.k, p.kprime
            ));
        }
        if let Some(s) = &cert.separation {
            out.push_str(&format!(
                "separated: phi(pi) = {} , phi(rho) = {}\n",
                serde_json::to_string(&s.phi_pi).unwrap_or_default(),
                serde_json::to_string(&s.phi_rho).unwrap_or_default()
            ));
        }
        out
    });
    Ok(())
}

fn replay(path: &Path, json_mode: bool) -> Result<()> {
    let cert: Certificate =
        formats::read_json(path).with_context(|| format!("reading {}", path.display()))?;
    replay_certificate(&cert).context("certificate rejected")?;
    print(
        json_mode,
        json!({"valid": true, "equal": cert.equal}),
        || format!("certificate valid (equal: {})\n", cert.equal),
    );
    Ok(())
}

/// Splits `a=x` and checks the letter.
fn assignments(assign: &[String]) -> Result<Vec<(u8, String)>> {
    assign
        .iter()
        .map(|s| {
            let (l, v) = s
                .split_once('=')
                .ok_or_else(|| anyhow!("assignment '{s}' lacks '='"))?;
            let l = l.trim().as_bytes();
            if l.len() != 1 {
                bail!("'{}' is not a single letter", String::from_utf8_lossy(l));
            }
            Ok((l[0], v.trim().to_string()))
        })
        .collect()
}

fn eval(term: &str, sgp: &SgpArgs, assign: &[String], json_mode: bool) -> Result<()> {
    let t = parse_term(term)?;
    let pairs = assignments(assign)?;
    let value = match sgp.load()? {
        Sgp::Table(s) => {
            let mut asg = Vec::new();
            for (l, v) in pairs {
                let i = s
                    .index_of(&v)
                    .ok_or_else(|| anyhow!("'{v}' is not an element"))?;
                asg.push((l, i));
            }
            let lookup = |a: u8| asg.iter().rev().find(|(l, _)| *l == a).map(|(_, i)| *i);
            s.show(&evaluate(&t, &s, &lookup)?)
        }
        Sgp::Local(s) => {
            let mut asg = Vec::new();
            for (l, v) in pairs {
                asg.push((l, s.parse_element(&v)?));
            }
            for a in t.letters() {
                if !asg.iter().any(|(l, _)| *l == a) {
                    asg.push((a, s.letter(a)?));
                }
            }
            let lookup = |a: u8| {
                asg.iter()
                    .rev()
                    .find(|(l, _)| *l == a)
                    .map(|(_, z)| z.clone())
            };
            s.show(&evaluate(&t, &*s, &lookup)?)
        }
    };
    print(
        json_mode,
        json!({"term": t.to_string(), "value": value}),
        || format!("{value}\n"),
    );
    Ok(())
}

fn language(path: &Path) -> Result<FactorialLanguage> {
    Ok(formats::load_language(path)
        .with_context(|| format!("reading {}", path.display()))?
        .0)
}

fn sc(lang: &Path, word: &str, json_mode: bool) -> Result<()> {
    let l = language(lang)?;
    let w = parse_word(word)?;
    l.alphabet().check_word(w.letters())?;
    let seq = l.coordinates(&w)?;
    let items: Vec<String> = seq.to_vec().iter().map(|x| x.to_string()).collect();
    print(
        json_mode,
        json!({"word": w, "coordinates": items, "m": seq.m()}),
        || format!("{seq}\n"),
    );
    Ok(())
}

fn boundary(lang: &Path, json_mode: bool) -> Result<()> {
    let l = language(lang)?;
    let b: Vec<String> = l.boundary().iter().map(|w| w.to_string()).collect();
    print(json_mode, json!({"boundary": b}), || {
        format!("{}\n", b.join(" "))
    });
    Ok(())
}

fn build(input: &LocalArgs, table: Option<&str>, json_mode: bool) -> Result<()> {
    let (s, added) = load_local(&input.lang, &input.group, input.f.as_deref())?;
    let size = s.size()?;
    let ex = export(&s, table.is_some())?;
    match table {
        Some("csv") => print!("{}", cayley_csv(&ex)?),
        Some(_) => println!("{}", serde_json::to_string_pretty(&ex)?),
        None => {
            let added: Vec<String> = added.iter().map(|w| w.to_string()).collect();
            let f = formats::gfunction_file(s.structure(), s.group());
            print(
                json_mode,
                json!({"size": size, "added_to_language": added, "f": f, "elements": ex.elements}),
                || {
                    let mut out = format!("|S| = {size}\n");
                    if !added.is_empty() {
                        out.push_str(&format!("closure added: {}\n", added.join(" ")));
                    }
                    for e in &ex.elements {
                        out.push_str(e);
                        out.push('\n');
                    }
                    out
                },
            );
        }
    }
    Ok(())
}

fn presentation(input: &LocalArgs, verify: bool, json_mode: bool) -> Result<()> {
    let (s, _) = load_local(&input.lang, &input.group, input.f.as_deref())?;
    let p = s.emit_presentation()?;
    let verified = if verify {
        Some(s.verify_relations(&p.relations)?)
    } else {
        None
    };
    let gens = p.generator_names(s.group());
    let rels = p.render(s.group());
    print(
        json_mode,
        json!({"generators": gens, "relations": rels, "verified": verified}),
        || {
            let mut out = format!("generators: {}\n", gens.join(" "));
            for r in &rels {
                out.push_str(r);
                out.push('\n');
            }
            if let Some(v) = verified {
                out.push_str(&format!("relations hold: {v}\n"));
            }
            out
        },
    );
    if verified == Some(false) {
        bail!("a relation fails under evaluation");
    }
    Ok(())
}

fn check_local_group(sgp: &SgpArgs, json_mode: bool) -> Result<()> {
    let t = match sgp.load()? {
        Sgp::Table(t) => t,
        Sgp::Local(s) => {
            if s.size()? > formats::EXPORT_LIMIT as u128 {
                bail!("semigroup too large to tabulate");
            }
            TableSemigroup::from_view(&*s)?.0
        }
    };
    let report = is_local_group(&t)?;
    let nilpotent = rees_quotient_is_nilpotent(&t);
    print(
        json_mode,
        json!({"size": t.len(), "report": report, "rees_quotient_nilpotent": nilpotent}),
        || {
            format!(
                "|S| = {}\nlocal group: {}\nidempotents: {} (all in minimal ideal: {})\nminimal ideal: {} elements, completely simple: {}\nRees quotient nilpotent: {}\n",
                t.len(),
                report.local_group,
                report.idempotents,
                report.idempotents_in_ideal,
                report.minimal_ideal,
                report.completely_simple_ideal,
                nilpotent
            )
        },
    );
    Ok(())
}

fn selftest(seed: u64, count: usize, json_mode: bool) -> Result<bool> {
    let ab = Alphabet::parse("ab")?;
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut corpus: Vec<Term> = Vec::new();
    let mut attempts = 0;
    while corpus.len() < count.max(2) {
        attempts += 1;
        if attempts > 100_000 {
            bail!("could not generate {count} distinct terms");
        }
        let t = random_rank1_term(&mut rng, &ab, 1 + corpus.len() % 2, 3, 2, 2);
        let (c, _) = canonicalize_rank1(&t, &ab)?;
        let form = Rank1Form::from_term(&c)?;
        if c.rank() == 1
            && form.m() <= 2
            && form.blocks.iter().all(|b| b.q.abs() <= 2)
            && !corpus.contains(&c)
        {
            corpus.push(c);
        }
    }
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    for (i, pi) in corpus.iter().enumerate() {
        let rho = &corpus[(i + 1) % corpus.len()];
        for (a, b) in [(pi, rho), (pi, pi)] {
            let (equal, cert) = decide(a, b, &ab, Variety::Lg, true)?;
            let replay_ok = replay_certificate(&cert).is_ok();
            let prob = IdentityProblem::from_canonical(a, b, &ab)?;
            let s5 = build_test_semigroup5(&prob)?;
            let s6 = build_test_semigroup6(&prob)?;
            let ok = replay_ok
                && equal == (a == b)
                && s5.separated() == !equal
                && s5.properties.all_hold()
                && s6.separated() == !equal
                && s6.words_differ() == !equal;
            if !ok {
                failures.push(format!("{a} = {b}"));
            }
            rows.push(json!({"pi": a.to_string(), "rho": b.to_string(), "equal": equal, "ok": ok}));
        }
    }
    print(
        json_mode,
        json!({"seed": seed, "pairs": rows.len(), "failures": failures, "results": rows}),
        || {
            let mut out = format!(
                "seed {seed}: {} pairs, {} failures\n",
                rows.len(),
                failures.len()
            );
            for f in &failures {
                out.push_str(&format!("  FAILED {f}\n"));
            }
            out
        },
    );
    Ok(failures.is_empty())
}

fn run(cli: Cli) -> Result<bool> {
    let j = cli.json;
    match cli.command {
        Command::Canon {
            term,
            alphabet,
            trace,
        } => canon(&term, alphabet.as_deref(), trace, j)?,
        Command::Decide {
            pi,
            rho,
            variety,
            alphabet,
            certificate,
            alt,
        } => run_decide(
            &pi,
            &rho,
            &variety,
            alphabet.as_deref(),
            certificate.as_deref(),
            alt,
            j,
        )?,
        Command::Replay { certificate } => replay(&certificate, j)?,
        Command::Eval { term, sgp, assign } => eval(&term, &sgp, &assign, j)?,
        Command::Sc { lang, word } => sc(&lang, &word, j)?,
        Command::Boundary { lang } => boundary(&lang, j)?,
        Command::Build { input, table } => build(&input, table.as_deref(), j)?,
        Command::Presentation { input, verify } => presentation(&input, verify, j)?,
        Command::CheckLocalGroup { sgp } => check_local_group(&sgp, j)?,
        Command::Selftest { seed, count } => return selftest(seed, count, j),
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
