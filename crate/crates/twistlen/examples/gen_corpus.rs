//! Regenerates corpora/sample_english.txt, the corpus bundled for the demo
//! experiment config and the accuracy acceptance tests. Output is a pure
//! function of LEN and SEED, so rerunning must never change the committed
//! file.

use std::fs;
use std::path::Path;

use twistlen::experiments::synthetic_english;

const LEN: usize = 220_000;
const SEED: u64 = 42;

fn main() -> std::io::Result<()> {
    let corpus = synthetic_english(LEN, SEED);
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpora");
    fs::create_dir_all(&dir)?;
    let path = dir.join("sample_english.txt");

    // wrap at 80 columns so the file stays diffable
    let flat = corpus.to_string();
    let mut wrapped = String::with_capacity(flat.len() + flat.len() / 80 + 1);
    for chunk in flat.as_bytes().chunks(80) {
        wrapped.push_str(std::str::from_utf8(chunk).expect("A-Z is ASCII"));
        wrapped.push('\n');
    }
    fs::write(&path, wrapped)?;
    println!("wrote {} ({} letters)", path.display(), corpus.len());
    Ok(())
}
