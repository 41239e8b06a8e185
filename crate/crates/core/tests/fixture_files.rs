//! The JSON files under `fixtures/` match the built-in fixtures.
//! Run with `EXTFAIR_BLESS=1` to rewrite them.

use std::path::PathBuf;

use extfair::model::{fixtures, io};
use extfair::{Allocation, Instance};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

type Case = (&'static str, Instance, Option<(&'static str, Allocation)>);

fn cases() -> Vec<Case> {
    vec![
        (
            "swap_envy",
            fixtures::swap_envy_instance(),
            Some(("swap_envy_allocation", fixtures::swap_envy_allocation())),
        ),
        (
            "swap_envy",
            fixtures::swap_envy_instance(),
            Some(("swap_envy_ef1_allocation", fixtures::swap_envy_ef1_allocation())),
        ),
        ("no_efx", fixtures::no_efx_instance(), None),
        (
            "ef_not_prop_max",
            fixtures::ef_not_prop_max_instance(),
            Some(("ef_not_prop_max_allocation", fixtures::ef_not_prop_max_allocation())),
        ),
        (
            "ef_not_prop_three",
            fixtures::ef_not_prop_three_instance(),
            Some(("ef_not_prop_three_allocation", fixtures::ef_not_prop_three_allocation())),
        ),
    ]
}

fn pretty(doc: &serde_json::Value) -> String {
    serde_json::to_string_pretty(doc).unwrap() + "\n"
}

#[test]
fn fixture_files_match_builtins() {
    let bless = std::env::var_os("EXTFAIR_BLESS").is_some();
    if bless {
        std::fs::create_dir_all(dir()).unwrap();
    }
    for (name, inst, alloc) in cases() {
        let mut files = vec![(format!("{name}.json"), pretty(&io::instance_to_json(&inst)))];
        if let Some((aname, pi)) = &alloc {
            files.push((format!("{aname}.json"), pretty(&io::allocation_to_json(&inst, pi))));
        }
        for (file, text) in files {
            let path = dir().join(&file);
            if bless {
                std::fs::write(&path, &text).unwrap();
            }
            let on_disk = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{file}: {e}"));
            assert_eq!(on_disk, text, "{file} is stale");
        }
        let parsed = io::parse_instance(&std::fs::read_to_string(dir().join(format!("{name}.json"))).unwrap()).unwrap();
        assert_eq!(parsed, inst);
        if let Some((aname, pi)) = alloc {
            let text = std::fs::read_to_string(dir().join(format!("{aname}.json"))).unwrap();
            assert_eq!(io::parse_allocation(&inst, &text).unwrap(), pi);
        }
    }
}
