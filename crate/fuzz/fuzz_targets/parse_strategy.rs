#![no_main]

use libfuzzer_sys::fuzz_target;
use sumsetkit::integer::Strategy;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(st) = text.parse::<Strategy>() {
        assert_eq!(st.name(), text);
        assert_eq!(st.to_string().parse::<Strategy>().unwrap(), st);
    }
});
