#![no_main]

use libfuzzer_sys::fuzz_target;
use patchwork_core::complex::FaceId;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(id) = s.parse::<FaceId>() {
        let printed = id.to_string();
        assert_eq!(printed.parse::<FaceId>().unwrap(), id);
    }
});
