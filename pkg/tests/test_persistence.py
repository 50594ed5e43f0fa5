import pathlib
import sys
from fractions import Fraction

ROOT_DIR = pathlib.Path(__file__).resolve().parent.parent
if str(ROOT_DIR) not in sys.path:
    sys.path.insert(0, str(ROOT_DIR))

import data_operations
from config import Config
from constants_kernel import _d_r_key, remainder_constants
from models import CertificationRun
from schemas import CertReport, StoreOutcome


def make_report(**overrides):
    fields = dict(
        claim="turan",
        degree=2,
        n_min=1,
        n_max=11,
        certified_from=12,
        failures=[1, 3, 5, 7, 9, 11],
        status="refuted",
    )
    fields.update(overrides)
    return CertReport(**fields)


def test_record_and_list_runs(test_session):
    outcome = data_operations.record_certification_run(make_report())
    assert outcome.ok
    run_id = outcome.data["id"]

    data_operations.record_certification_run(
        make_report(claim="logconcave", degree=None, n_min=12, n_max=9000, analytic_threshold=9001,
                    certified_from=12, failures=[], status="certified", precision=192)
    )

    runs = data_operations.list_certification_runs()
    assert len(runs) == 2
    turan_runs = data_operations.list_certification_runs(claim="turan")
    assert [run.id for run in turan_runs] == [run_id]
    assert turan_runs[0].failures == [1, 3, 5, 7, 9, 11]

    with test_session() as session:
        stored = session.get(CertificationRun, run_id)
        assert stored.status == "refuted"
        assert stored.shift == -1


def test_store_constant_upserts(test_session):
    missing = data_operations.get_stored_constant(2, "D_r", "key")
    assert missing == StoreOutcome(ok=True)

    assert data_operations.store_constant(2, "D_r", "key", "1", "2", False).ok
    assert data_operations.store_constant(2, "D_r", "key", "5", "11/2", True).ok

    stored = data_operations.get_stored_constant(2, "D_r", "key")
    assert stored.ok
    assert stored.data["lower"] == "5"
    assert stored.data["upper"] == "11/2"
    assert stored.data["certified"] is True


def test_database_errors_become_failed_outcomes(monkeypatch):
    def broken_session():
        raise RuntimeError("no database")

    monkeypatch.setattr(data_operations, "SessionLocal", broken_session)
    outcome = data_operations.store_constant(2, "D_r", "key", "1", "2", True)
    assert not outcome.ok
    assert "no database" in outcome.error


def test_remainder_constants_read_from_store(test_session):
    key = _d_r_key(Config.DR_PRECISION, Config.DR_INITIAL_CELLS, Config.DR_EVAL_BUDGET)
    data_operations.store_constant(2, "D_r", key, "5", "11/2", True)

    C_r, D_r, certified, source = remainder_constants(2, 128, published=False, store=True)
    assert source == "stored"
    assert certified is True
    assert D_r.contains(Fraction(21, 4))
    assert C_r.upper <= 2.0007


def test_published_constants_skip_store(test_session):
    _, D_r, _, source = remainder_constants(2, 128, published=True, store=True)
    assert source == "published"
    assert abs(float(D_r) - 5.3) < 1e-12
