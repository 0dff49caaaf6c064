//! A directory of automata, one `<name>.aut` file each.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;
use zeckauto::automata::AutomatonError;
use zeckauto::logic::LogicError;
use zeckauto::{Dfa, Registry};

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{}: {error}", path.display())]
    Io { path: PathBuf, error: io::Error },
    #[error("{}: {error}", path.display())]
    Format { path: PathBuf, error: AutomatonError },
    #[error("{}: {error}", path.display())]
    Conflict { path: PathBuf, error: LogicError },
}

#[derive(Debug, Clone)]
pub struct Store {
    dir: PathBuf,
}

impl Store {
    /// Open `dir`, creating it if needed.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Store, StoreError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|error| StoreError::Io { path: dir.clone(), error })?;
        Ok(Store { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(format!("{name}.aut"))
    }

    pub fn save(&self, name: &str, dfa: &Dfa) -> Result<(), StoreError> {
        let path = self.path(name);
        fs::write(&path, dfa.to_text()).map_err(|error| StoreError::Io { path, error })
    }

    pub fn load(&self, name: &str) -> Result<Option<Dfa>, StoreError> {
        let path = self.path(name);
        match fs::read_to_string(&path) {
            Ok(text) => Dfa::from_text(&text).map(Some).map_err(|error| StoreError::Format { path, error }),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(error) => Err(StoreError::Io { path, error }),
        }
    }

    /// Register every stored automaton, in name order. Returns how many
    /// were loaded.
    pub fn load_into(&self, reg: &mut Registry) -> Result<usize, StoreError> {
        let io_err = |error| StoreError::Io { path: self.dir.clone(), error };
        let mut names: Vec<String> = fs::read_dir(&self.dir)
            .map_err(io_err)?
            .filter_map(|e| e.ok())
            .filter_map(|e| {
                let p = e.path();
                (p.extension()? == "aut").then(|| p.file_stem()?.to_str().map(str::to_owned)).flatten()
            })
            .collect();
        names.sort();
        for name in &names {
            let dfa = self.load(name)?.expect("listed file exists");
            reg.define(name, dfa).map_err(|error| StoreError::Conflict { path: self.path(name), error })?;
        }
        Ok(names.len())
    }
}
