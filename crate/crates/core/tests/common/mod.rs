#![allow(dead_code)]

use std::path::PathBuf;

use nfmertens::{load_field, FieldDescriptor};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// Every descriptor in the corpus directory, sorted by file name.
pub fn corpus() -> Vec<(String, FieldDescriptor)> {
    let mut paths: Vec<_> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "toml"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).expect("readable descriptor");
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let field = load_field(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, field)
        })
        .collect()
}

pub fn corpus_field(name: &str) -> FieldDescriptor {
    corpus()
        .into_iter()
        .find(|(n, _)| n == name)
        .unwrap_or_else(|| panic!("no corpus field {name}"))
        .1
}

/// Kronecker symbol `(d | m)` for `m >= 1`, by quadratic reciprocity.
pub fn kronecker(d: i64, mut m: u64) -> i64 {
    let mut result = 1;
    while m % 2 == 0 {
        m /= 2;
        result *= match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    if result == 0 {
        return 0;
    }
    let mut a = d.rem_euclid(m as i64) as u64;
    let mut b = m;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if b % 8 == 3 || b % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut b);
        if a % 4 == 3 && b % 4 == 3 {
            result = -result;
        }
        a %= b;
    }
    if b == 1 {
        result
    } else {
        0
    }
}

/// `sum_{d | k} (disc | d)` for `k = 1..=limit`; index 0 unused.
pub fn divisor_character_sums(disc: i64, limit: usize) -> Vec<i64> {
    let mut out = vec![0i64; limit + 1];
    for d in 1..=limit {
        let chi = kronecker(disc, d as u64);
        if chi == 0 {
            continue;
        }
        for m in (d..=limit).step_by(d) {
            out[m] += chi;
        }
    }
    out
}
