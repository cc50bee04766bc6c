//! On-disk storage: datasets under `datasets/<sha256>.csv`, finished jobs
//! under `jobs/<job_id>.json`.

use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use tempfile::NamedTempFile;

use crate::job::Job;

#[derive(Debug, Clone)]
pub struct Store {
    root: PathBuf,
}

impl Store {
    pub fn open(root: impl Into<PathBuf>) -> std::io::Result<Self> {
        let root = root.into();
        std::fs::create_dir_all(root.join("datasets"))?;
        std::fs::create_dir_all(root.join("jobs"))?;
        Ok(Store { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn dataset_id(bytes: &[u8]) -> String {
        Sha256::digest(bytes)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn dataset_path(&self, id: &str) -> Option<PathBuf> {
        let valid = id.len() == 64 && id.bytes().all(|b| b.is_ascii_hexdigit());
        valid.then(|| self.root.join("datasets").join(format!("{id}.csv")))
    }

    /// Stores `bytes` under their digest; storing the same bytes twice is a
    /// no-op.
    pub fn put_dataset(&self, bytes: &[u8]) -> std::io::Result<String> {
        let id = Self::dataset_id(bytes);
        let path = self.dataset_path(&id).expect("digest is a valid id");
        if !path.exists() {
            write_atomic(&path, bytes)?;
        }
        Ok(id)
    }

    pub fn get_dataset(&self, id: &str) -> std::io::Result<Option<Vec<u8>>> {
        let Some(path) = self.dataset_path(id) else {
            return Ok(None);
        };
        match std::fs::read(path) {
            Ok(b) => Ok(Some(b)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e),
        }
    }

    pub fn save_job(&self, job: &Job) -> std::io::Result<()> {
        let bytes = serde_json::to_vec_pretty(job).expect("jobs serialize");
        write_atomic(&self.root.join("jobs").join(format!("{}.json", job.job_id)), &bytes)
    }

    /// Finished jobs left by earlier runs of the service.
    pub fn load_jobs(&self) -> std::io::Result<Vec<Job>> {
        let mut jobs = Vec::new();
        for entry in std::fs::read_dir(self.root.join("jobs"))? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "json") {
                if let Ok(job) = serde_json::from_slice::<Job>(&std::fs::read(&path)?) {
                    jobs.push(job);
                }
            }
        }
        Ok(jobs)
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().expect("store paths have a parent");
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
