//! Regenerate the shipped fixtures: `cargo run -p hgx --example make_fixtures`.

use std::path::Path;

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir).expect("fixture directory");
    for (stem, doc) in hgx::export::fixtures() {
        let path = dir.join(format!("{stem}.json"));
        std::fs::write(&path, doc.to_json() + "\n").expect("write fixture");
        println!("wrote {}", path.display());
    }
}
