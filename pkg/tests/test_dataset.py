import random

from botbrain.bt import default_registry, parse_xml, validate
from botbrain.dataset import (
    export_corpus,
    generate_bt_corpus,
    generate_qa_corpus,
    load_corpus,
)
from botbrain.qa import OutcomeContext, answer_template
from botbrain.strategy import SYSTEM_PROMPT


class TestBtCorpus:
    def test_single_sample_deterministic_and_valid(self):
        a = generate_bt_corpus(1, seed=5)[0]
        b = generate_bt_corpus(1, seed=5)[0]
        assert a == b
        tree = parse_xml(a.output)
        assert validate(tree, default_registry()) == []

    def test_instruction_starts_with_system_prompt(self):
        for sample in generate_bt_corpus(5, seed=1):
            assert sample.instruction.startswith(SYSTEM_PROMPT)

    def test_identity_paraphraser_is_default(self):
        plain = generate_bt_corpus(3, seed=2)
        identical = generate_bt_corpus(3, seed=2, paraphraser=lambda s: s)
        assert plain == identical

    def test_paraphraser_rewrites_text_but_not_tree(self):
        upper = generate_bt_corpus(3, seed=2, paraphraser=str.upper)
        plain = generate_bt_corpus(3, seed=2)
        for a, b in zip(upper, plain):
            assert a.output == b.output
            assert a.instruction != b.instruction
            assert a.instruction.startswith(SYSTEM_PROMPT)  # prompt itself untouched

    def test_corpus_properties_on_slice(self):
        # histogram of task counts covers 1..6 and everything validates
        samples = generate_bt_corpus(300, seed=7)
        registry = default_registry()
        counts = set()
        for sample in samples:
            tree = parse_xml(sample.output)
            assert validate(tree, registry) == []
            counts.add(len(tree.main_root.children))
        assert counts == {1, 2, 3, 4, 5, 6}

    def test_pure_function_of_seed(self):
        assert generate_bt_corpus(20, seed=9) == generate_bt_corpus(20, seed=9)
        assert generate_bt_corpus(20, seed=9) != generate_bt_corpus(20, seed=10)


class TestQaCorpus:
    def test_answers_rederivable_by_template_answerer(self):
        for sample in generate_qa_corpus(100, seed=3):
            context = OutcomeContext.from_xml(sample.context)
            assert answer_template(context, sample.question).text == sample.answer

    def test_deterministic(self):
        assert generate_qa_corpus(10, seed=4) == generate_qa_corpus(10, seed=4)

    def test_direct_lookup_sample(self):
        # a clearly answerable status question appears with a matching answer
        samples = generate_qa_corpus(50, seed=6)
        status_like = [s for s in samples if s.question.startswith("Did")]
        assert status_like
        for s in status_like:
            assert s.answer  # never empty


class TestExport:
    def test_round_trip_equality(self, tmp_path):
        samples = generate_bt_corpus(100, seed=1)
        path = export_corpus(samples, tmp_path / "bt.jsonl")
        records = load_corpus(path)
        assert records == [s.to_record() for s in samples]

    def test_empty_corpus_empty_file(self, tmp_path):
        path = export_corpus([], tmp_path / "empty.jsonl")
        assert path.read_text() == ""
        assert load_corpus(path) == []

    def test_embedded_newline_stays_one_line(self, tmp_path):
        class Weird:
            @staticmethod
            def to_record():
                return {"instruction": "line one\nline two", "input": "", "output": "x"}

        path = export_corpus([Weird()], tmp_path / "weird.jsonl")
        lines = path.read_text().splitlines()
        assert len(lines) == 1
        assert load_corpus(path)[0]["instruction"] == "line one\nline two"

    def test_qa_corpus_round_trip(self, tmp_path):
        samples = generate_qa_corpus(30, seed=2)
        path = export_corpus(samples, tmp_path / "qa.jsonl")
        assert load_corpus(path) == [s.to_record() for s in samples]


class TestPaperScaleCorpora:
    def test_bt_corpus_at_full_size(self):
        samples = generate_bt_corpus(7500, seed=1)
        assert len(samples) == 7500
        registry = default_registry()
        counts = set()
        # validity spot-checked densely, histogram over the whole corpus
        for i, sample in enumerate(samples):
            tree = parse_xml(sample.output)
            counts.add(len(tree.main_root.children))
            if i % 25 == 0:
                assert validate(tree, registry) == []
        assert counts == {1, 2, 3, 4, 5, 6}

    def test_qa_corpus_at_full_size(self):
        samples = generate_qa_corpus(11000, seed=1)
        assert len(samples) == 11000
        assert all(s.answer for s in samples)
