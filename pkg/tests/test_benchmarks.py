from graphilosophy.benchmarks import (
    N_QUERIES,
    make_chunking_benchmark,
    make_retrieval_benchmark,
    run_chunking_comparison,
    run_retrieval_benchmark,
)


class TestRetrievalBenchmark:
    def test_generator_is_deterministic(self):
        a = make_retrieval_benchmark()
        b = make_retrieval_benchmark()
        assert a == b

    def test_corpus_shape(self):
        docs, queries = make_retrieval_benchmark()
        assert len(queries) == N_QUERIES == 40
        ids = [d for d, _ in docs]
        assert len(ids) == len(set(ids))
        for q in queries:
            assert len(q["relevant"]) == 1
            assert q["relevant"][0] in set(ids)

    def test_relevant_doc_shares_all_content_tokens(self):
        docs, queries = make_retrieval_benchmark()
        by_id = dict(docs)
        for q in queries:
            assert set(q["query"].split()) == set(by_id[q["relevant"][0]].split())


class TestChunkingBenchmark:
    def test_generator_is_deterministic(self):
        a_docs, a_queries = make_chunking_benchmark()
        b_docs, b_queries = make_chunking_benchmark()
        assert a_queries == b_queries
        assert [d.text for d in a_docs] == [d.text for d in b_docs]

    def test_documents_are_multi_topic(self):
        docs, queries = make_chunking_benchmark()
        assert len(queries) >= 40
        for doc in docs:
            assert len(doc.segments) == 3
            assert len({s.topic for s in doc.segments}) == 3

    def test_adaptive_strictly_beats_fixed(self):
        cmp = run_chunking_comparison()
        assert cmp["adaptive"]["Recall@5"] > cmp["fixed"]["Recall@5"]
        assert cmp["adaptive"]["NDCG@5"] > cmp["fixed"]["NDCG@5"]


def test_retrieval_orderings():
    report = run_retrieval_benchmark()
    sem = report.per_method["semantic"]
    bm = report.per_method["bm25"]
    assert sem["P@1"] == 1.0
    assert bm["P@10"] < sem["P@10"]
