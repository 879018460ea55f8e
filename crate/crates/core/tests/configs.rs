use std::path::Path;

use cpe_core::io::config::{load_config, parse_config, RunConfig};

fn shipped(name: &str) -> RunConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../config").join(name);
    load_config(&path).unwrap()
}

#[test]
fn shipped_defaults_match_the_parser() {
    assert_eq!(shipped("defaults.cfg"), parse_config("").unwrap());
}

#[test]
fn shipped_examples_parse() {
    assert_eq!(shipped("shear.cfg").time.t_end, 1.0);
    let mms = shipped("mms.cfg");
    assert_eq!((mms.params.r, mms.params.delta), (0.0, 1e-8));
}
