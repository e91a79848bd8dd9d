import logging
import sys
from datetime import datetime
from pathlib import Path


def setup_logging(log_level: str = "INFO", log_file: str = None):
    """
    Set up application logging configuration.
    """
    # Create logs directory if it doesn't exist
    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)

    log_format = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format=log_format,
        handlers=[
            logging.StreamHandler(sys.stdout),
            logging.FileHandler(log_file) if log_file else logging.NullHandler()
        ],
        force=True,
    )


def get_logger(name: str):
    """
    Get a logger instance for the given name.
    """
    return logging.getLogger(name)


def log_graph_build(logger, n: int, edge_count: int, theta: float, rho_max: float,
                    duration: float = None):
    """
    Log graph construction information.
    """
    log_data = {
        "event": "graph_build",
        "vertices": n,
        "edges": edge_count,
        "theta": theta,
        "rho_max": rho_max,
        "duration_ms": duration * 1000 if duration else None,
        "timestamp": datetime.utcnow().isoformat()
    }

    logger.info(f"Graph Build: {log_data}")


def log_basis_computation(logger, mode: str, columns: int, nnz: int, duration: float,
                          method: str = None):
    """
    Log basis computation information.
    """
    log_data = {
        "event": "basis_computation",
        "mode": mode,
        "columns": columns,
        "nnz": nnz,
        "method": method,
        "duration_seconds": duration,
        "timestamp": datetime.utcnow().isoformat()
    }

    logger.info(f"Basis Computation: {log_data}")


def log_vertex_insertion(logger, vertex: int, status: str, edge_count: int,
                         affected: int, duration: float):
    """
    Log a single vertex insertion and the size of the refreshed region.
    """
    log_data = {
        "event": "vertex_insertion",
        "vertex": vertex,
        "status": status,
        "new_edges": edge_count,
        "affected_centers": affected,
        "duration_seconds": duration,
        "timestamp": datetime.utcnow().isoformat()
    }

    logger.info(f"Vertex Insertion: {log_data}")


def log_experiment_cell(logger, experiment: str, cell: dict, duration: float = None):
    """
    Log one configuration cell of an experiment sweep.
    """
    log_data = {
        "event": "experiment_cell",
        "experiment": experiment,
        "cell": cell,
        "duration_seconds": duration,
        "timestamp": datetime.utcnow().isoformat()
    }

    logger.info(f"Experiment Cell: {log_data}")


def log_error(logger, error: Exception, context: dict = None):
    """
    Log error information with context.
    """
    error_data = {
        "event": "error",
        "error_type": type(error).__name__,
        "error_message": str(error),
        "context": context or {},
        "timestamp": datetime.utcnow().isoformat()
    }

    logger.error(f"Error: {error_data}", exc_info=True)
