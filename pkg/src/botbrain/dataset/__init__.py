from .btgen import BtSample, generate_bt_corpus, generate_bt_sample
from .io import export_corpus, load_corpus
from .qagen import QaSample, generate_qa_corpus, generate_qa_sample, synthesize_context

__all__ = [
    "BtSample",
    "QaSample",
    "export_corpus",
    "generate_bt_corpus",
    "generate_bt_sample",
    "generate_qa_corpus",
    "generate_qa_sample",
    "load_corpus",
    "synthesize_context",
]
