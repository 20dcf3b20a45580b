use std::path::PathBuf;

use nlgm::corpus::{Corpus, EvalInstance};
use nlgm::dialogue::BaselineIndex;
use nlgm::seed::Seed;

use crate::failure::{emit, read, Context, Failure};

#[derive(clap::Args)]
pub struct Args {
    /// Training corpus (JSON Lines with acts); references are the sentences sampled from.
    #[arg(long)]
    train: PathBuf,
    /// Instances to generate for; each needs acts.
    #[arg(long)]
    test: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write generated instances here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: Args) -> Result<(), Failure> {
    let train = Corpus::from_jsonl(&read(&args.train)?).at(&args.train)?;
    let test = Corpus::from_jsonl(&read(&args.test)?).at(&args.test)?;
    let (index, report) = BaselineIndex::build(&train);
    if !report.skipped_without_acts.is_empty() {
        eprintln!(
            "warning: skipped {} training instances without acts: {}",
            report.skipped_without_acts.len(),
            report.skipped_without_acts.join(", ")
        );
    }

    let mut rng = Seed(args.seed).rng("baseline");
    let mut generated = Vec::with_capacity(test.len());
    for inst in &test {
        let acts = inst
            .acts
            .as_ref()
            .ok_or_else(|| Failure::from(nlgm::Error::MissingActs).context(format!("test instance {}", inst.id)))?;
        let g = index
            .generate(acts, &mut rng)
            .map_err(|e| Failure::from(e).context(format!("test instance {}", inst.id)))?;
        if g.backed_off {
            eprintln!("note: {} used nearest signature {}", inst.id, g.signature);
        }
        generated.push(EvalInstance {
            id: inst.id.clone(),
            hypothesis: g.text,
            references: inst.references.clone(),
            acts: inst.acts.clone(),
        });
    }
    let out = Corpus::new(generated)?;
    emit(args.out.as_deref(), &out.to_jsonl())
}
