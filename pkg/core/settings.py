"""
Process-level settings and observability wiring.
Environment is read from .env through python-dotenv; nothing is required.
"""

import logging
import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel

logger = logging.getLogger(__name__)


class Settings(BaseModel):
    """Observability settings taken from the environment"""
    weave_project: Optional[str] = None
    wandb_project: Optional[str] = None
    wandb_mode: str = "disabled"
    log_level: str = "WARNING"


def load_settings() -> Settings:
    """Load .env and build settings"""
    load_dotenv()
    return Settings(
        weave_project=os.getenv("WEAVE_PROJECT") or None,
        wandb_project=os.getenv("WANDB_PROJECT") or None,
        wandb_mode=os.getenv("WANDB_MODE", "disabled"),
        log_level=os.getenv("HESSLAB_LOG_LEVEL", "WARNING"),
    )


def init_observability(settings: Optional[Settings] = None, run_config: Optional[dict] = None) -> Settings:
    """Configure logging, and start weave / wandb when projects are configured"""
    settings = settings or load_settings()
    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    if settings.weave_project:
        import weave
        weave.init(settings.weave_project)
        logger.info("weave tracing enabled for %s", settings.weave_project)

    if settings.wandb_project and settings.wandb_mode != "disabled":
        import wandb
        wandb.init(project=settings.wandb_project, mode=settings.wandb_mode, config=run_config or {})
        logger.info("wandb run started in %s mode", settings.wandb_mode)

    return settings
