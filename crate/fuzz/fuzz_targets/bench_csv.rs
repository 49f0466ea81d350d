#![no_main]

use libfuzzer_sys::fuzz_target;
use visbst::bench::{read_bench_csv, read_online_csv, write_bench_csv, write_online_csv};

fuzz_target!(|data: &[u8]| {
    if let Ok(records) = read_bench_csv(data) {
        let mut buf = Vec::new();
        write_bench_csv(&records, &mut buf).unwrap();
        let back = read_bench_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), records.len());
    }
    if let Ok(records) = read_online_csv(data) {
        let mut buf = Vec::new();
        write_online_csv(&records, &mut buf).unwrap();
        assert_eq!(
            read_online_csv(buf.as_slice()).unwrap().len(),
            records.len()
        );
    }
});
