//! Write a synthetic set as a `<root>/<label>/*.pgm` tree, load it back and
//! dump per-class overlap images.
//!
//! cargo run --example pgm_dataset [out-dir]

use std::path::PathBuf;

use fuzzygeno::imaging::{load_dataset, LoaderOptions};
use fuzzygeno::imaging::{pgm, FRAME};
use fuzzygeno::pipeline::class_overlaps;
use fuzzygeno::synthetic::separable_set;

fn main() -> fuzzygeno::Result<()> {
    let root = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("fuzzygeno-pgm"));
    let data = separable_set(4, 5, 0.3, 2)?;
    for (i, (img, label)) in data.items().iter().enumerate() {
        let dir = root.join(label.to_string());
        std::fs::create_dir_all(&dir).map_err(|e| fuzzygeno::Error::Write { path: dir.clone(), source: e })?;
        pgm::write(&dir.join(format!("{i:03}.pgm")), FRAME, FRAME, &img.to_bytes())?;
    }

    let loaded = load_dataset(&root, &LoaderOptions::default())?;
    println!("loaded {} samples of classes {:?} from {}", loaded.len(), loaded.classes(), root.display());
    for o in class_overlaps(&loaded)? {
        let path = root.join(format!("overlap_{}.pgm", o.class_id));
        pgm::write(&path, FRAME, FRAME, &o.image.to_bytes())?;
        println!("class {}: {} samples -> {}", o.class_id, o.sample_count, path.display());
    }
    Ok(())
}
