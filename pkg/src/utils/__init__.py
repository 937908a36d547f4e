# File formats and document loading
from .formats import (
    CODE_FORMAT,
    INSTANCE_FORMAT,
    PERMUTATION_FORMAT,
    CodeDocument,
    DocumentLoader,
    InstanceDocument,
    code_from_dict,
    code_to_dict,
    dumps,
    function_to_doc,
    instance_from_dict,
    instance_to_dict,
    permutation_to_dict,
)

__all__ = [
    'CODE_FORMAT',
    'INSTANCE_FORMAT',
    'PERMUTATION_FORMAT',
    'CodeDocument',
    'DocumentLoader',
    'InstanceDocument',
    'code_from_dict',
    'code_to_dict',
    'dumps',
    'function_to_doc',
    'instance_from_dict',
    'instance_to_dict',
    'permutation_to_dict',
]
