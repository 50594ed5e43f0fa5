# Standard library imports
import logging

# Third-party imports
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker
from sqlmodel import SQLModel

# Local imports
from config import Config
from utils import log_operation

logger = logging.getLogger(__name__)

# Get the database URL
DATABASE_URL = Config.get_database_url()

# Create engine with appropriate configuration
if DATABASE_URL.startswith("sqlite"):
    engine = create_engine(
        DATABASE_URL,
        connect_args={"check_same_thread": False},
        echo=False
    )
else:
    engine = create_engine(
        DATABASE_URL,
        echo=False,
        pool_pre_ping=True,
    )

# Create session factory
SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)


def init_db(bind=None):
    """Initialize the database by creating all tables"""
    # models must be imported so their tables are registered on the metadata
    import models  # noqa: F401

    try:
        SQLModel.metadata.create_all(bind or engine)
        log_operation("init_db", f"tables ready at {DATABASE_URL}", level="DEBUG", logger=logger)
    except Exception as e:
        log_operation("init_db", f"database initialization error: {e}", level="ERROR", logger=logger)
        # The results store is optional; computations go on without it
