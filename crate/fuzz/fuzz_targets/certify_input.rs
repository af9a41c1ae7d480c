#![no_main]

use libfuzzer_sys::fuzz_target;
use nmf_certify::certify::certify_all;
use nmf_certify::io::parse_matrix_text;
use nmf_certify::Tolerances;

// Two header-format matrices C and S separated by a line holding `---`.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Some((c_text, s_text)) = text.split_once("\n---\n") else {
        return;
    };
    let (Ok(c), Ok(s)) = (parse_matrix_text(c_text), parse_matrix_text(s_text)) else {
        return;
    };
    if c.rows() > 8 || s.rows() > 8 || c.cols() > 4 || c.cols() != s.cols() {
        return;
    }
    let Ok(r) = c.matmul(&s.transpose()) else {
        return;
    };
    let _ = certify_all(&r, &c, &s, &Tolerances::default());
});
