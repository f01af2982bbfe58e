//! Generate a seeded corpus and summarise it. With a directory argument the
//! instances are written there as `.crit` files.

use epsilon_forge::corpus::{gen_corpus, Limits};

fn main() {
    let out = std::env::args().nth(1);
    let corpus = gen_corpus(1, 50, Limits::default());
    for inst in &corpus {
        println!("{inst}");
    }
    let nested = corpus.iter().filter(|i| i.max_subst_rank >= 2).count();
    let longest = corpus.iter().map(|i| i.solution_index).max().unwrap_or(0);
    println!("{nested} instances reach rank 2, longest run {longest}");
    if let Some(dir) = out {
        std::fs::create_dir_all(&dir).unwrap();
        for inst in &corpus {
            std::fs::write(format!("{dir}/{}.crit", inst.name), inst.cr.to_string()).unwrap();
        }
    }
}
