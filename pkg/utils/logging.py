import logging
import logging.handlers
import json
import sys
from datetime import datetime
from pathlib import Path
from typing import Dict, Any, Optional

import numpy as np


ROOT_LOGGER_NAME = "capillary-waves"


def _to_jsonable(value: Any) -> Any:
    """Make numpy payloads printable; arrays are summarised, never dumped."""
    if isinstance(value, np.ndarray):
        if value.size <= 8:
            return _to_jsonable(value.tolist())
        return {
            "shape": list(value.shape),
            "dtype": str(value.dtype),
            "l2": float(np.linalg.norm(value)),
        }
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(np.real(value)), "im": float(np.imag(value))}
    if isinstance(value, dict):
        return {str(k): _to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_jsonable(v) for v in value]
    if isinstance(value, Path):
        return str(value)
    return value


class JSONFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        log_obj = {
            "timestamp": datetime.fromtimestamp(record.created).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }

        if record.exc_info:
            log_obj["exception"] = self.formatException(record.exc_info)

        if hasattr(record, 'extra_data'):
            log_obj.update(_to_jsonable(record.extra_data))

        return json.dumps(log_obj, ensure_ascii=False, default=str)


class RunLoggerAdapter(logging.LoggerAdapter):
    """Merges bound run context (grid, backend, scenario) into ``extra_data``."""

    def process(self, msg: str, kwargs: Dict[str, Any]) -> tuple[str, Dict[str, Any]]:
        extra_data = dict(kwargs.pop('extra_data', {}))
        if self.extra:
            extra_data.update(self.extra)

        kwargs['extra'] = {'extra_data': extra_data}
        return msg, kwargs


def setup_logging(
    log_level: str = "INFO",
    console_enabled: bool = True,
    file_enabled: bool = True,
    json_format: bool = True,
    logs_dir: str = "logs"
) -> logging.Logger:
    logger = logging.getLogger(ROOT_LOGGER_NAME)
    logger.setLevel(getattr(logging, log_level.upper()))

    logger.handlers.clear()

    if json_format:
        formatter = JSONFormatter()
    else:
        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s'
        )

    if console_enabled:
        # stderr keeps stdout free for CLI summaries
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

    if file_enabled:
        logs_path = Path(logs_dir)
        logs_path.mkdir(parents=True, exist_ok=True)

        file_handler = logging.handlers.RotatingFileHandler(
            logs_path / "toolkit.log",
            maxBytes=50 * 1024 * 1024,  # 50MB
            backupCount=10
        )
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

        error_handler = logging.handlers.RotatingFileHandler(
            logs_path / "error.log",
            maxBytes=50 * 1024 * 1024,  # 50MB
            backupCount=5
        )
        error_handler.setLevel(logging.ERROR)
        error_handler.setFormatter(formatter)
        logger.addHandler(error_handler)

    return logger


def get_logger(name: str, extra_context: Optional[Dict[str, Any]] = None) -> RunLoggerAdapter:
    base_logger = logging.getLogger(ROOT_LOGGER_NAME).getChild(name)
    return RunLoggerAdapter(base_logger, extra_context or {})


def log_run_event(
    logger: RunLoggerAdapter,
    event_type: str,
    scenario: str,
    data: Dict[str, Any],
    level: str = "INFO"
) -> None:
    extra_data = {
        "event_type": event_type,
        "scenario": scenario,
        "run_data": data
    }

    message = f"[{event_type.upper()}] {scenario}: {data.get('status', 'N/A')}"

    log_method = getattr(logger, level.lower())
    log_method(message, extra_data=extra_data)
