use std::fs;
use std::path::{Path, PathBuf};

use eewt_core::analysis::{self, AnalysisError};
use eewt_core::channel::ErasureChannel;
use eewt_core::codes::CodeError;
use eewt_core::descriptor::SchemeDescriptor;
use eewt_core::storage::{self, ShareFile, StorageError};
use eewt_core::wiretap::{self, SchemeError};
use eewt_core::{rng, Field, Gf, IndexSet, Mode, NestedScheme, Observation};

use crate::args::{Cli, CodeChoice, Command, ConstructionKind, SchemeArgs, SharesAction};
use crate::Failure;

type Result<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn data(msg: impl std::fmt::Display) -> Failure {
    Failure::Data(msg.to_string())
}

fn analysis_failure(e: AnalysisError) -> Failure {
    match e {
        AnalysisError::ExhaustiveTooLarge { .. } => usage(format!("{e}; try --mode sampled:N")),
        other => data(other),
    }
}

fn scheme_failure(e: SchemeError) -> Failure {
    match e {
        SchemeError::InvalidParams(_)
        | SchemeError::BadDimensions(_)
        | SchemeError::CapacityViolation { .. }
        | SchemeError::Code(_) => usage(e.to_string()),
        other => data(other),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| data(format!("{}: {e}", path.display())))
}

fn write_or_print(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| data(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Smallest GF(2^m) with 2^m >= n + 1.
fn default_field(n: usize) -> Result<Field> {
    let m = (1..=16u32)
        .find(|&m| (1usize << m) > n)
        .ok_or_else(|| usage(format!("no binary field with at most 2^16 elements fits n = {n}")))?;
    Field::with_default_modulus(2, m).map_err(data)
}

pub fn load_scheme(args: &SchemeArgs) -> Result<NestedScheme> {
    if let Some(path) = &args.scheme {
        let text = read_text(path)?;
        let descriptor = SchemeDescriptor::from_toml(&text).map_err(data)?;
        return descriptor.to_scheme().map_err(data);
    }
    let nu = args.nu.ok_or_else(|| usage("--nu is required without --scheme"))?;
    let mu = args.mu.ok_or_else(|| usage("--mu is required without --scheme"))?;
    if mu > nu {
        return Err(usage(format!("μ > ν (mu = {mu}, nu = {nu})")));
    }
    let construction = args.construction.unwrap_or(ConstructionKind::Eval);
    let field = match (&args.field, args.n) {
        (Some(spec), _) => spec.parse::<Field>().map_err(|e| usage(e.to_string()))?,
        (None, Some(n)) => default_field(n)?,
        (None, None) => return Err(usage("--n or --field is required")),
    };
    match construction {
        ConstructionKind::Eval => {
            let n = args.n.ok_or_else(|| usage("--n is required for the eval construction"))?;
            NestedScheme::eval(&field, n, nu, mu, args.k).map_err(scheme_failure)
        }
        ConstructionKind::Cyclic => {
            let len = field.size() as usize - 1;
            if let Some(n) = args.n.filter(|&n| n != len) {
                return Err(usage(format!("the cyclic construction over {field} has n = {len}, not {n}")));
            }
            NestedScheme::cyclic(&field, nu, mu, args.k).map_err(scheme_failure)
        }
    }
}

fn parse_vector(field: &Field, text: &str, len: usize, what: &str) -> Result<Vec<Gf>> {
    let v = wiretap::parse_symbols(field, &text.replace(',', " ")).map_err(|e| usage(e.to_string()))?;
    if v.len() != len {
        return Err(usage(format!("{what} needs {len} symbols, got {}", v.len())));
    }
    Ok(v)
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Construct { scheme, out } => {
            let s = load_scheme(&scheme)?;
            write_or_print(out.as_ref(), &SchemeDescriptor::from_scheme(&s).to_toml())
        }
        Command::Encode {
            scheme,
            secret,
            input,
            randomizer,
            reveal,
            seed,
            out,
        } => {
            let s = load_scheme(&scheme)?;
            let f = s.field();
            let secret_text = match (secret, input) {
                (Some(t), _) => t,
                (None, Some(path)) => read_text(&path)?,
                (None, None) => return Err(usage("--secret or --in is required")),
            };
            let secret = parse_vector(f, &secret_text, s.k(), "secret")?;
            let codeword = match randomizer {
                Some(t) => {
                    let e = parse_vector(f, &t, s.k_star(), "randomizer")?;
                    s.encode(&secret, &e).map_err(data)?
                }
                None => s.encode_random(&secret, seed.seed).map_err(data)?.0,
            };
            let text = match reveal {
                Some(indices) => {
                    let j = IndexSet::new(s.n(), indices).map_err(|e| usage(e.to_string()))?;
                    Observation::restrict(&codeword, &j).map_err(data)?.to_text(f)
                }
                None => format!("{}\n", wiretap::format_symbols(f, &codeword)),
            };
            write_or_print(out.as_ref(), &text)
        }
        Command::Decode { scheme, input, out } => {
            let s = load_scheme(&scheme)?;
            let text = read_text(&input)?;
            let obs = if text.contains(':') {
                Observation::parse(&text, s.n(), s.field()).map_err(data)?
            } else {
                let word = wiretap::parse_symbols(s.field(), &text).map_err(data)?;
                if word.len() != s.n() {
                    return Err(data(format!("codeword has {} symbols, expected {}", word.len(), s.n())));
                }
                Observation::restrict(&word, &IndexSet::full(s.n())).map_err(data)?
            };
            let secret = s.decode(&obs).map_err(data)?;
            write_or_print(out.as_ref(), &format!("{}\n", wiretap::format_symbols(s.field(), &secret)))
        }
        Command::Simulate { scheme, secret, seed } => simulate(&load_scheme(&scheme)?, secret, seed.seed),
        Command::Verify { scheme, mode, seed } => {
            let s = load_scheme(&scheme)?;
            let mode = mode.with_seed(seed.seed);
            let security = analysis::verify_security(&s, mode).map_err(analysis_failure)?;
            let reliability = analysis::verify_reliability(&s, mode, seed.seed).map_err(analysis_failure)?;
            let passed = security.passed() && reliability.passed();
            println!("{}", if passed { "PASS" } else { "FAIL" });
            print!("\n{security}\n{reliability}");
            if passed {
                Ok(())
            } else {
                Err(Failure::VerificationFailed)
            }
        }
        Command::Dlp {
            scheme,
            code,
            i,
            mode,
            seed,
        } => {
            let s = load_scheme(&scheme)?;
            let c = match code {
                CodeChoice::Sum => s.sum_code(),
                CodeChoice::Message => s.message_code(),
                CodeChoice::Randomizer => s.randomizer_code(),
            };
            let mode = mode.with_seed(seed.seed);
            let entry = |i: usize| -> Result<usize> {
                match mode {
                    Mode::Exhaustive => c.dlp(i).map_err(|e| match e {
                        CodeError::ExhaustiveTooLarge(_) => usage(format!("{e}; try --mode sampled:N")),
                        other => usage(other.to_string()),
                    }),
                    Mode::Sampled { seed, trials } => c.dlp_sampled(i, seed, trials).map_err(|e| usage(e.to_string())),
                }
            };
            if let Mode::Sampled { .. } = mode {
                println!("# sampled lower bound, {mode}, seed {}", seed.seed);
            }
            match i {
                Some(i) => println!("{}", entry(i)?),
                None => {
                    println!("i,k_i");
                    for i in 0..=c.len() {
                        println!("{i},{}", entry(i)?);
                    }
                }
            }
            Ok(())
        }
        Command::Leakage {
            scheme,
            mode,
            seed,
            out,
        } => {
            let s = load_scheme(&scheme)?;
            let profile = analysis::leakage_profile(&s, mode.with_seed(seed.seed)).map_err(analysis_failure)?;
            write_or_print(out.as_ref(), &profile.to_csv())
        }
        Command::Shares { action } => shares(action),
    }
}

fn simulate(s: &NestedScheme, secret: Option<String>, seed: u64) -> Result<()> {
    let f = s.field();
    let secret = match secret {
        Some(t) => parse_vector(f, &t, s.k(), "secret")?,
        None => s.random_vector(s.k(), &mut rng::seeded(seed, rng::stream::PAYLOAD)),
    };
    let (codeword, e) = s.encode_random(&secret, seed).map_err(data)?;
    let mut main = ErasureChannel::with_stream(s.n(), s.nu(), seed, rng::stream::MAIN_CHANNEL).map_err(data)?;
    let mut tap = ErasureChannel::with_stream(s.n(), s.mu(), seed, rng::stream::WIRETAP).map_err(data)?;
    let received = main.transmit(&codeword).map_err(data)?;
    let tapped = tap.transmit(&codeword).map_err(data)?;

    println!("seed: {seed}");
    println!("secret: {}", wiretap::format_symbols(f, &secret));
    println!("randomizer: {}", wiretap::format_symbols(f, &e));
    println!("codeword: {}", wiretap::format_symbols(f, &codeword));
    println!("main_revealed: {}", received.j);
    let decoded = s.decode(&received);
    match &decoded {
        Ok(d) => {
            println!("decoded: {}", wiretap::format_symbols(f, d));
            println!("decoded_matches: {}", d == &secret);
        }
        Err(err) => println!("decoded: error: {err}"),
    }
    println!("wiretap_revealed: {}", tapped.j);
    let pairs: Vec<String> = tapped
        .j
        .iter()
        .zip(&tapped.symbols)
        .map(|(i, &v)| format!("{i}:{}", f.format_elem(v)))
        .collect();
    println!("wiretap_observation: {}", pairs.join(" "));
    let eq = analysis::equivocation_formula(s, &tapped.j).map_err(data)?;
    println!("wiretap_equivocation: {}", eq.dims);
    println!("secret_length: {}", s.k());
    match decoded {
        Ok(d) if d == secret => Ok(()),
        Ok(_) => Err(data("decoded secret differs from the original")),
        Err(err) => Err(data(err)),
    }
}

fn read_share(path: &Path) -> Result<ShareFile> {
    let bytes = fs::read(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
    ShareFile::from_bytes(&bytes).map_err(|e| data(format!("{}: {e}", path.display())))
}

fn storage_failure(e: StorageError) -> Failure {
    match e {
        StorageError::InsufficientShares { have, need } => {
            data(format!("only {have} distinct shares; need {} more shares", need - have))
        }
        other => data(other),
    }
}

fn shares(action: SharesAction) -> Result<()> {
    match action {
        SharesAction::Split {
            scheme,
            input,
            out,
            seed,
        } => {
            let s = load_scheme(&scheme)?;
            let message = fs::read(&input).map_err(|e| data(format!("{}: {e}", input.display())))?;
            let files = storage::split(&s, &message, seed.seed).map_err(storage_failure)?;
            let base = out.unwrap_or(input).to_string_lossy().into_owned();
            for (i, file) in files.iter().enumerate() {
                let name = storage::share_file_name(&base, i);
                fs::write(&name, file.to_bytes()).map_err(|e| data(format!("{name}: {e}")))?;
                println!("{name}");
            }
            Ok(())
        }
        SharesAction::Join { scheme, out, shares } => {
            let s = load_scheme(&scheme)?;
            let files = shares.iter().map(|p| read_share(p)).collect::<Result<Vec<_>>>()?;
            let message = storage::reconstruct(&s, &files).map_err(storage_failure)?;
            fs::write(&out, &message).map_err(|e| data(format!("{}: {e}", out.display())))?;
            println!("wrote {} bytes to {}", message.len(), out.display());
            Ok(())
        }
        SharesAction::Leak { scheme, shares } => {
            let s = load_scheme(&scheme)?;
            let files = shares.iter().map(|p| read_share(p)).collect::<Result<Vec<_>>>()?;
            let report = storage::adversary_view(&s, &files).map_err(storage_failure)?;
            println!("nodes: {}", report.nodes);
            println!("blocks: {}", report.block_count);
            println!("secret_symbols_per_block: {}", report.k);
            println!("equivocation_per_block: {}", report.equivocation_per_block.dims);
            println!("leaked_symbols_per_block: {}", report.shortfall());
            println!("full_secrecy: {}", report.full_secrecy());
            Ok(())
        }
        SharesAction::Inspect { share } => {
            let file = read_share(&share)?;
            let h = file.header;
            println!("magic: EEWT");
            println!("version: {}", storage::VERSION);
            println!("field: gf(2^{}, modulus={:#X})", h.m, h.modulus);
            println!("n: {}", h.n);
            println!("k: {}", h.k);
            println!("k_star: {}", h.k_star);
            println!("nu: {}", h.nu);
            println!("mu: {}", h.mu);
            println!("node_index: {}", h.node_index);
            println!("block_count: {}", h.block_count);
            println!("payload_bytes: {}", file.payload.len());
            Ok(())
        }
    }
}
