use hlawka_core::gmf::generalized_matrix_function;
use hlawka_core::linalg::read_matrix_file;
use hlawka_core::{Complex64, Result};
use serde_json::json;

use super::parse_character;
use crate::args::{Format, ImmanantArgs};

pub fn immanant_value(args: &ImmanantArgs) -> Result<Complex64> {
    let x = read_matrix_file(&args.matrix)?;
    let (group, chi) = parse_character(&args.character, x.nrows())?;
    generalized_matrix_function(&x, &group, &chi)
}

/// Plain output is `re im`, each with 17 significant digits.
pub(crate) fn render(args: &ImmanantArgs) -> Result<String> {
    let v = immanant_value(args)?;
    Ok(match args.common.format {
        None => format!("{:.16e} {:.16e}\n", v.re, v.im),
        Some(Format::Json) => {
            let mut s = serde_json::to_string_pretty(&json!({
                "character": args.character,
                "re": v.re,
                "im": v.im,
            }))
            .expect("value serializes");
            s.push('\n');
            s
        }
        Some(Format::Csv) => format!("re,im\n{:.16e},{:.16e}\n", v.re, v.im),
    })
}
