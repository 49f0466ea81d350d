#![no_main]

use libfuzzer_sys::fuzz_target;
use visbst::reference::basic;
use visbst::text::{format_series, parse_series};
use visbst::{build_graph, AlgorithmId, Criterion};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(series) = parse_series(text) else {
        return;
    };
    assert_eq!(parse_series(&format_series(&series)).unwrap(), series);
    if series.len() > 256 {
        return;
    }
    for criterion in Criterion::ALL {
        let reference = basic(&series, criterion);
        for algo in AlgorithmId::ALL {
            assert_eq!(
                build_graph(&series, algo, criterion),
                reference,
                "{algo} {criterion}"
            );
        }
    }
});
