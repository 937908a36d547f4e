# Core orchestration components
from .parallel import run_chunks

__all__ = ['run_chunks']
