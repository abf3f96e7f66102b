#![no_main]

use dppc::model::{parse_set_system, write_set_system};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(system) = parse_set_system(data) {
        let text = write_set_system(&system);
        let again = parse_set_system(text.as_bytes()).expect("written form parses");
        assert!(again == system);
        assert_eq!(write_set_system(&again), text);
    }
});
