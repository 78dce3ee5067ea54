from .config import ServiceConfig, load_config
from .service import SessionState, create_app, serve
from .store import AuditLog, LogEntry

__all__ = ["ServiceConfig", "load_config", "SessionState", "create_app", "serve", "AuditLog", "LogEntry"]
