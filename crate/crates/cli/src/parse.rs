use liequant::C64;

pub fn numbers(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{}`: {e}", t.trim())))
        .collect()
}

fn exactly<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let v = numbers(s)?;
    v.try_into()
        .map_err(|v: Vec<f64>| format!("expected {N} comma-separated numbers, got {}", v.len()))
}

pub fn vec3(s: &str) -> Result<[f64; 3], String> {
    exactly::<3>(s)
}

/// Row-major.
pub fn matrix3(s: &str) -> Result<[[f64; 3]; 3], String> {
    let m = exactly::<9>(s)?;
    Ok([[m[0], m[1], m[2]], [m[3], m[4], m[5]], [m[6], m[7], m[8]]])
}

/// `re,im` or a single real number.
pub fn complex(s: &str) -> Result<C64, String> {
    match numbers(s)?.as_slice() {
        [re] => Ok(C64::new(*re, 0.0)),
        [re, im] => Ok(C64::new(*re, *im)),
        v => Err(format!("expected `re,im`, got {} numbers", v.len())),
    }
}
