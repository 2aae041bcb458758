#![no_main]

use libfuzzer_sys::fuzz_target;
use sumsetkit::graph::{bottleneck_partition, parse_graph};

fuzz_target!(|data: &[u8]| {
    let Ok(g) = parse_graph(data) else {
        return;
    };
    let n = g.vertex_count();
    assert!(g
        .edges()
        .iter()
        .all(|e| e.a >= 1 && e.b <= n && e.a != e.b && e.w > 0));
    if n % 2 == 0 && n <= 64 {
        let r = bottleneck_partition(&g).unwrap();
        assert_eq!(r.side_one().len(), n / 2);
    }
});
