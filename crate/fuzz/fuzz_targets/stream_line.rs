#![no_main]

use libfuzzer_sys::fuzz_target;
use visbst::stream::{parse_stream_line, StreamCommand, StreamSession};
use visbst::Criterion;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let mut session = StreamSession::new(3);
    for (i, line) in text.lines().enumerate() {
        match parse_stream_line(line, i + 1) {
            Ok(Some(StreamCommand::Point(p))) => {
                let _ = session.push(p);
            }
            Ok(Some(StreamCommand::Emit(c))) => {
                session.graph(c);
            }
            Ok(None) | Err(_) => {}
        }
        if session.len() > 512 {
            break;
        }
    }
    let tree = session.tree().clone();
    assert!(tree.check_invariants().is_ok());
    let hvg = session.graph(Criterion::Horizontal);
    assert_eq!(hvg.node_count(), session.len());
});
