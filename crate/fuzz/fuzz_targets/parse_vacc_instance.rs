#![no_main]

use dppc::model::{parse_vacc_instance, write_vacc_instance};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(inst) = parse_vacc_instance(data) {
        let text = write_vacc_instance(&inst);
        let again = parse_vacc_instance(text.as_bytes()).expect("written form parses");
        assert_eq!(write_vacc_instance(&again), text);
    }
});
