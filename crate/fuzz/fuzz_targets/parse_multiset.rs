#![no_main]

use libfuzzer_sys::fuzz_target;
use sumsetkit::multiset::{parse_multiset, MAX_VALUE};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = parse_multiset(data) else {
        return;
    };
    assert!(!s.is_empty());
    let entries = s.entries();
    assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
    assert!(entries
        .iter()
        .all(|&(v, m)| v >= 1 && v <= MAX_VALUE && m >= 1));
    // canonical text re-parses to the same multiset
    let text: Vec<String> = s.expanded().iter().map(u64::to_string).collect();
    if text.len() <= 4096 {
        assert_eq!(parse_multiset(text.join(" ").as_bytes()).unwrap(), s);
    }
});
