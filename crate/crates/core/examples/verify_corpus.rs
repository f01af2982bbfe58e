//! Check every property on a generated corpus. Pass a seed and a count to
//! change the corpus.

use epsilon_forge::corpus::{gen_corpus, Limits};
use epsilon_forge::verify::{verify_all, VerifyOptions};

fn main() {
    let mut args = std::env::args().skip(1);
    let seed = args.next().map_or(1, |s| s.parse().expect("seed"));
    let count = args.next().map_or(20, |s| s.parse().expect("count"));

    let corpus: Vec<_> = gen_corpus(seed, count, Limits::default())
        .into_iter()
        .map(|i| (i.name, i.cr))
        .collect();
    let report = verify_all(&corpus, &VerifyOptions::default());
    println!("{report}");
    if !report.passed() {
        std::process::exit(1);
    }
}
