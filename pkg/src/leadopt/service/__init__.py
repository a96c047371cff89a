"""HTTP service, persistence, and depiction."""

from leadopt.service.app import create_app, serve
from leadopt.service.depiction import depict
from leadopt.service.store import CampaignHandle, SessionRecord, Store

__all__ = [
    "CampaignHandle",
    "SessionRecord",
    "Store",
    "create_app",
    "depict",
    "serve",
]
