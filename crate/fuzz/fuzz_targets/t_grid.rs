#![no_main]

use fragsim::grid::TGrid;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(grid) = TGrid::parse(text) {
        let values = grid.values();
        assert_eq!(values.len(), grid.len());
        assert!(values.iter().all(|v| v.is_finite() && *v >= grid.lo));
    }
});
