"""Binary file formats for matrices, vectors, quantized and low-rank scorers, FFN bundles."""

from hire.io.binary import (
    read_common_path,
    read_ffn,
    read_low_rank,
    read_matrix,
    read_quantized,
    read_vector,
    write_common_path,
    write_ffn,
    write_low_rank,
    write_matrix,
    write_quantized,
    write_vector,
)

__all__ = [
    "read_common_path",
    "read_ffn",
    "read_low_rank",
    "read_matrix",
    "read_quantized",
    "read_vector",
    "write_common_path",
    "write_ffn",
    "write_low_rank",
    "write_matrix",
    "write_quantized",
    "write_vector",
]
