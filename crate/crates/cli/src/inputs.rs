//! Input file loading: groups, cocycles, manifolds, categories, groupoids
//! and algebras, in the formats the library documents, plus a few builtin
//! descriptors for corpus objects.

use anyhow::{bail, Context, Result};
use pifinite::dw::{DwTheory, ManifoldDescription};
use pifinite::fincat::{CategoryJson, FinCategory};
use pifinite::fingroup::{Cocycle2, CocycleJson, FinGroup, GroupJson};
use pifinite::frobenius::AlgebraJson;
use pifinite::groupoid::{FinGroupoid, GroupoidJson};
use pifinite::pairing::WeightedCategory;
use serde::Deserialize;
use std::path::{Path, PathBuf};

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GroupFile {
    Builtin { builtin: String, #[serde(default)] n: usize },
    Table(GroupJson),
}

pub fn load_group(path: &Path) -> Result<FinGroup> {
    let file: GroupFile = parse(path)?;
    Ok(match file {
        GroupFile::Table(json) => {
            FinGroup::from_json(&json).map_err(|e| anyhow::anyhow!("{}: {}", path.display(), e))?
        }
        GroupFile::Builtin { builtin, n } => match builtin.as_str() {
            "cyclic" => FinGroup::cyclic(n),
            "symmetric" => FinGroup::symmetric(n),
            "dihedral" => FinGroup::dihedral(n),
            "dicyclic" => FinGroup::dicyclic(n),
            "quaternion8" => FinGroup::quaternion8(),
            "alternating4" => FinGroup::alternating4(),
            other => bail!("unknown builtin group {:?}", other),
        },
    })
}

pub fn load_cocycle(group: FinGroup, path: &Path) -> Result<Cocycle2> {
    let json: CocycleJson = parse(path)?;
    if json.table.len() != group.order() {
        bail!(
            "{}: cocycle table is {}x? but the group has order {}",
            path.display(),
            json.table.len(),
            group.order()
        );
    }
    let cocycle = Cocycle2::from_json(group, &json);
    let check = cocycle.validate();
    if !check.is_valid() {
        bail!("{}: not a normalized 2-cocycle ({:?})", path.display(), check);
    }
    Ok(cocycle)
}

pub fn load_theory(group: &Path, cocycle: Option<&Path>) -> Result<DwTheory> {
    let g = load_group(group)?;
    match cocycle {
        None => Ok(DwTheory::untwisted(g)),
        Some(c) => {
            let coc = load_cocycle(g, c)?;
            Ok(DwTheory::twisted(coc).map_err(|e| anyhow::anyhow!("{}", e))?)
        }
    }
}

#[derive(Deserialize)]
struct TheoryFile {
    group: GroupJson,
    #[serde(default)]
    cocycle: Option<CocycleJson>,
}

pub fn load_theory_file(path: &Path) -> Result<DwTheory> {
    let file: TheoryFile = parse(path)?;
    let g = FinGroup::from_json(&file.group).map_err(|e| anyhow::anyhow!("{}: {}", path.display(), e))?;
    match file.cocycle {
        None => Ok(DwTheory::untwisted(g)),
        Some(json) => {
            let cocycle = Cocycle2::from_json(g, &json);
            DwTheory::twisted(cocycle).map_err(|e| anyhow::anyhow!("{}: {}", path.display(), e))
        }
    }
}

pub fn load_manifold(path: &Path) -> Result<ManifoldDescription> {
    let m: ManifoldDescription = parse(path)?;
    m.validate().map_err(|e| anyhow::anyhow!("{}: {}", path.display(), e))?;
    Ok(m)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CategoryFile {
    Builtin { builtin: String, #[serde(default)] n: u64, #[serde(default)] max: usize },
    Table(CategoryJson),
}

pub fn load_category(path: &Path) -> Result<FinCategory> {
    let file: CategoryFile = parse(path)?;
    Ok(match file {
        CategoryFile::Table(json) => {
            FinCategory::from_json(&json).map_err(|e| anyhow::anyhow!("{}: {}", path.display(), e))?
        }
        CategoryFile::Builtin { builtin, n, max } => match builtin.as_str() {
            "divisor_poset" => FinCategory::divisor_poset(n),
            "finset" => FinCategory::finset(max),
            other => bail!("unknown builtin category {:?}", other),
        },
    })
}

/// Weighted categories for the pairing commands: the `finset` builtin avoids
/// materializing a composition table; explicit tables go through
/// [`FinCategory`] first.
pub fn load_weighted_category(path: &Path) -> Result<WeightedCategory> {
    let file: CategoryFile = parse(path)?;
    Ok(match file {
        CategoryFile::Builtin { builtin, n, max } => match builtin.as_str() {
            "finset" => WeightedCategory::finset_homs(max).0,
            "divisor_poset" => WeightedCategory::from_fincategory(&FinCategory::divisor_poset(n)),
            other => bail!("unknown builtin category {:?}", other),
        },
        CategoryFile::Table(json) => {
            let cat = FinCategory::from_json(&json)
                .map_err(|e| anyhow::anyhow!("{}: {}", path.display(), e))?;
            WeightedCategory::from_fincategory(&cat)
        }
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GroupoidFile {
    Bg { bg: GroupJson },
    Action { action: ActionSpec },
    Table(GroupoidJson),
}

#[derive(Deserialize)]
struct ActionSpec {
    group: GroupJson,
    /// `table[g][point] = g . point`.
    table: Vec<Vec<usize>>,
}

pub fn load_groupoid(path: &Path) -> Result<FinGroupoid> {
    let file: GroupoidFile = parse(path)?;
    Ok(match file {
        GroupoidFile::Table(json) => {
            FinGroupoid::from_json(&json).map_err(|e| anyhow::anyhow!("{}: {}", path.display(), e))?
        }
        GroupoidFile::Bg { bg } => {
            let g = FinGroup::from_json(&bg).map_err(|e| anyhow::anyhow!("{}: {}", path.display(), e))?;
            FinGroupoid::bg(&g)
        }
        GroupoidFile::Action { action } => {
            let g = FinGroup::from_json(&action.group)
                .map_err(|e| anyhow::anyhow!("{}: {}", path.display(), e))?;
            FinGroupoid::action_groupoid(&g, &action.table)
                .map_err(|e| anyhow::anyhow!("{}: {}", path.display(), e))?
        }
    })
}

pub fn load_algebra(path: &Path) -> Result<AlgebraJson> {
    parse(path)
}

pub fn sorted_json_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}
