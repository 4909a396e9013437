use std::collections::BTreeSet;
use std::fmt::Write;

use plcommute_core::rational::{self, to_f64};
use plcommute_core::{PlMap, Rational, Result};
use serde_json::json;

use crate::config::Format;

/// Breakpoints merged with `samples` equally spaced abscissas, sorted.
pub fn graph_points(map: &PlMap, samples: usize) -> Result<Vec<(Rational, Rational)>> {
    let mut xs: BTreeSet<Rational> = map.points().iter().map(|p| p.0.clone()).collect();
    let last = samples as i64 - 1;
    xs.extend((0..=last).map(|k| Rational::new(k.into(), last.into())));
    xs.into_iter()
        .map(|x| {
            let y = map.eval(&x)?;
            Ok((x, y))
        })
        .collect()
}

pub fn render(map: &PlMap, samples: usize, format: Format, floats: bool) -> Result<String> {
    let points = graph_points(map, samples)?;
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str(if floats {
                "x,y,x_float,y_float\n"
            } else {
                "x,y\n"
            });
            for (x, y) in &points {
                write!(out, "{},{}", rational::format(x), rational::format(y)).unwrap();
                if floats {
                    write!(out, ",{},{}", to_f64(x), to_f64(y)).unwrap();
                }
                out.push('\n');
            }
        }
        Format::SvgPoints => {
            let coords: Vec<String> = points
                .iter()
                .map(|(x, y)| format!("{},{}", to_f64(x), to_f64(y)))
                .collect();
            // flip so that y grows upwards inside the unit viewBox
            writeln!(
                out,
                r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1 1">"#
            )
            .unwrap();
            writeln!(
                out,
                r#"  <polyline transform="matrix(1 0 0 -1 0 1)" fill="none" stroke="black" stroke-width="0.004" points="{}"/>"#,
                coords.join(" ")
            )
            .unwrap();
            out.push_str("</svg>\n");
        }
        Format::Json => {
            let rows: Vec<_> = points
                .iter()
                .map(|(x, y)| json!([rational::format(x), rational::format(y)]))
                .collect();
            out = serde_json::to_string_pretty(&json!({ "points": rows })).unwrap();
            out.push('\n');
        }
    }
    Ok(out)
}
