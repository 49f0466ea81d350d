#![no_main]

use libfuzzer_sys::fuzz_target;
use visbst::codec::{from_snapshot, to_snapshot};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(tree) = from_snapshot(text) else {
        return;
    };
    let rendered = to_snapshot(&tree);
    assert_eq!(from_snapshot(&rendered).unwrap(), tree);
    assert_eq!(tree.to_series().len(), tree.len());
});
