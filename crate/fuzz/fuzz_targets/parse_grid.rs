#![no_main]

use dppc_cli::grid::{parse_grid, MAX_GRID_LEN};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(values) = parse_grid::<u64>(text) {
        assert!(!values.is_empty() && values.len() <= MAX_GRID_LEN);
    }
    if let Ok(values) = parse_grid::<f64>(text) {
        assert!(!values.is_empty() && values.len() <= MAX_GRID_LEN);
    }
});
