import os
from pathlib import Path
from typing import Optional

from sqlalchemy.engine import Engine
from sqlmodel import SQLModel, create_engine


def build_ledger_url(out_dir: Path) -> str:
    url = os.getenv("PIML_LEDGER_URL", "").strip()
    if url:
        return url
    return f"sqlite:///{(out_dir / 'runs.db').resolve()}"


def create_engine_from_env(out_dir: Path, url: Optional[str] = None) -> Engine:
    url = url or build_ledger_url(out_dir)
    if url.startswith("sqlite:///"):
        Path(url.removeprefix("sqlite:///")).parent.mkdir(parents=True, exist_ok=True)
    engine = create_engine(url)
    # Auto-create tables on first use
    SQLModel.metadata.create_all(engine)
    return engine


def dispose_engine(engine: Engine) -> None:
    engine.dispose()
