//! Class selectors: `linear-orders`, `s-permutations:2`, `join(A,B)`,
//! `colored(A,2)`, or a path to a class file.

use std::path::Path;

use amalgam::structures::{load_class, ClassDefinition, ClassKind};
use anyhow::{bail, Context as _, Result};

pub const BUILTINS: &[(&str, &str)] = &[
    ("finite-sets", "pure sets, no relations"),
    ("linear-orders", "finite linear orders"),
    (
        "s-permutations:<s>",
        "sets with s independent linear orders",
    ),
    (
        "colored-linear-orders:<s>",
        "linear orders with each point colored by one of s colors",
    ),
    (
        "colored-sets:<s>",
        "sets with each point colored by one of s colors",
    ),
    ("join(<A>,<B>)", "both structures on the same set"),
    ("colored(<A>,<s>)", "A with an s-coloring of the points"),
    ("<path>.toml", "user class file"),
];

pub fn parse(selector: &str) -> Result<ClassDefinition> {
    let s = selector.trim();
    if s.ends_with(".toml") || Path::new(s).is_file() {
        return load_class(Path::new(s)).with_context(|| format!("loading class file {s}"));
    }
    let mut p = Parser { src: s, pos: 0 };
    let class = p.expr()?;
    if p.pos != s.len() {
        bail!("trailing input in class selector `{s}` at offset {}", p.pos);
    }
    Ok(class)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, tok: &str) -> bool {
        let trimmed = self.rest().trim_start();
        let skipped = self.rest().len() - trimmed.len();
        if trimmed.starts_with(tok) {
            self.pos += skipped + tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if !self.eat(tok) {
            bail!("expected `{tok}` at offset {} in `{}`", self.pos, self.src);
        }
        Ok(())
    }

    fn ident(&mut self) -> String {
        let trimmed = self.rest().trim_start();
        self.pos += self.rest().len() - trimmed.len();
        let len = trimmed
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '-'))
            .unwrap_or(trimmed.len());
        self.pos += len;
        trimmed[..len].to_string()
    }

    fn number(&mut self) -> Result<usize> {
        let word = self.ident();
        word.parse()
            .with_context(|| format!("expected a number, found `{word}`"))
    }

    fn expr(&mut self) -> Result<ClassDefinition> {
        let name = self.ident();
        let class = match name.as_str() {
            "join" => {
                self.expect("(")?;
                let a = self.expr()?;
                self.expect(",")?;
                let b = self.expr()?;
                self.expect(")")?;
                ClassDefinition::join(&a, &b)
            }
            "colored" => {
                self.expect("(")?;
                let a = self.expr()?;
                self.expect(",")?;
                let s = self.number()?;
                self.expect(")")?;
                ClassDefinition::colored(&a, s)?
            }
            "finite-sets" => ClassDefinition::finite_sets(),
            "linear-orders" => ClassDefinition::linear_orders(),
            "s-permutations" | "colored-linear-orders" | "colored-sets" => {
                self.expect(":")?;
                let s = self.number()?;
                match name.as_str() {
                    "s-permutations" => ClassDefinition::s_permutations(s)?,
                    "colored-linear-orders" => ClassDefinition::colored_linear_orders(s)?,
                    _ => ClassDefinition::colored_sets(s)?,
                }
            }
            "" => bail!("empty class selector"),
            other => bail!("unknown class `{other}` (see `amalgam classes`)"),
        };
        Ok(class)
    }
}

/// Bound used when `--bound` is not given.
pub fn default_bound(class: &ClassDefinition) -> usize {
    match class.kind() {
        ClassKind::LinearOrders => 6,
        ClassKind::ColoredLinearOrders(_) => 5,
        ClassKind::SPermutations(s) => 2 * s + 3,
        _ => 5,
    }
}
