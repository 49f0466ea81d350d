#![no_main]

use libfuzzer_sys::fuzz_target;
use visbst::text::{format_edge_list, parse_edge_list};
use visbst::VisibilityGraph;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(edges) = parse_edge_list(text) else {
        return;
    };
    let nodes: Vec<i64> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    let graph = VisibilityGraph::from_edges(nodes, edges.iter().copied());
    assert_eq!(graph.edge_count(), edges.len());
    assert_eq!(parse_edge_list(&format_edge_list(&graph)).unwrap(), edges);
});
