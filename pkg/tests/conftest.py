import pytest

from spothull.config import build_config
from spothull.model import serialize_dataset
from spothull.pipeline import run_pipeline
from spothull.synthetic import four_blob_dataset


@pytest.fixture(scope="session")
def blob_csv(tmp_path_factory):
    ds, blobs = four_blob_dataset(seed=7)
    path = tmp_path_factory.mktemp("data") / "blobs.csv"
    path.write_text(serialize_dataset(ds, "csv"))
    return path, ds, blobs


@pytest.fixture(scope="session")
def artifacts(tmp_path_factory, blob_csv):
    path, ds, _ = blob_csv
    out = tmp_path_factory.mktemp("artifacts")
    cfg = build_config(input=str(path), format="csv", out=str(out), k=4, seed=0)
    result = run_pipeline(cfg)
    return out, result
