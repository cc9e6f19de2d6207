import json
import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Iterable, Iterator, Optional

from sqlalchemy.engine import Engine
from sqlmodel import Session, select

from db.sqlmodel import create_engine_from_env, dispose_engine
from models.run_record import RunRecord

logger = logging.getLogger("piml.ledger")


def open_ledger(out_dir: Path) -> Engine:
    return create_engine_from_env(out_dir)


@contextmanager
def ledger(out_dir: Path) -> Iterator[Engine]:
    engine = open_ledger(out_dir)
    try:
        yield engine
    finally:
        dispose_engine(engine)


def record_runs(engine: Engine, records: Iterable[RunRecord]) -> list[RunRecord]:
    """Append records; existing rows are never updated."""
    stored = []
    with Session(engine) as session:
        for record in records:
            row = RunRecord.model_validate(record.model_dump(exclude={"id"}))
            session.add(row)
            stored.append(row)
        session.commit()
        for row in stored:
            session.refresh(row)
    logger.info("runs recorded", extra={"count": len(stored)})
    return stored


def load_runs(
    engine: Engine,
    *,
    run_ids: Optional[list[str]] = None,
    sweep_id: Optional[str] = None,
    benchmark: Optional[str] = None,
) -> list[RunRecord]:
    with Session(engine) as session:
        query = select(RunRecord)
        if run_ids:
            query = query.where(RunRecord.run_id.in_(run_ids))
        if sweep_id:
            query = query.where(RunRecord.sweep_id == sweep_id)
        if benchmark:
            query = query.where(RunRecord.benchmark == benchmark)
        return list(session.exec(query.order_by(RunRecord.id)).all())


def load_run_dir(run_dir: Path) -> RunRecord:
    path = run_dir / "record.json"
    if not path.exists():
        raise FileNotFoundError(f"no record.json in {run_dir}")
    return RunRecord.model_validate(json.loads(path.read_text()))
