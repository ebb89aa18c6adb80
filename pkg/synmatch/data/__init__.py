# coding: utf-8

# flake8: noqa

# import data helpers into data package
from synmatch.data.checkpoint import CheckpointInfo, load_checkpoint, load_model, read_archive, save_checkpoint, write_archive
from synmatch.data.formats import (
    decode_tensor, encode_tensor, load_manifest, read_image, read_label, read_tensor,
    save_manifest, write_image, write_label, write_tensor,
)
from synmatch.data.loader import SampleStore, prepare_views, sample_batch, stream_rng
from synmatch.data.scribble import derive_scribbles
from synmatch.data.split import build_split
from synmatch.data.synthetic import generate_synthetic_dataset
