#![no_main]

use libfuzzer_sys::fuzz_target;
use patchwork_core::instance::parse_instance_bytes;

fuzz_target!(|data: &[u8]| {
    if let Ok(inst) = parse_instance_bytes(data) {
        for id in inst.complex.all_ids() {
            assert_eq!(
                inst.complex.face_index(id).ok(),
                inst.complex.faces.iter().position(|f| &f.id == id)
            );
        }
    }
});
