# Storage module for report persistence
from .report_storage import ReportRecord, ReportStorage

__all__ = ['ReportRecord', 'ReportStorage']
