"""Word embeddings by PPMI-matrix factorization with window and noise
sampling, positional contexts, and an external-memory training pipeline."""

from .cooc import (CoocStats, context_marginals, context_space_size,
                   corpus_word_counts, count_corpus, count_pairs,
                   decode_context, encode_context, sentence_records,
                   stream_pairs)
from .errors import (ConfigError, EmptyVocabularyError, EvaluationError,
                     IntegrityError, ParseError, PmivecError)
from .evaluation import (METHOD_3COSADD, METHOD_3COSMUL, AnalogyResult,
                         SimilarityResult, eval_analogy, eval_similarity,
                         format_report, load_analogy_dataset,
                         load_similarity_dataset, solve_analogy, spearman)
from .extmem import (Marginals, PairTuple, count_scheduled_updates, expand_si,
                     read_tuples, shuffle_file, sort_collapse, train_mi,
                     train_si, write_pairs)
from .negsampler import (SamplerTable, build_sampler, positional_sampler,
                         unigram_sampler)
from .ppmi import (SmoothingConfig, ppmi_from_counts, ppmi_matrix,
                   ppmi_targets, ppmi_value)
from .seeding import derive_rng
from .trainer import (EmbeddingPair, TrainConfig, global_loss,
                      init_embeddings, sgd_update, train_standard)
from .vectors import (COMBO_W, COMBO_W_PLUS_WC, COMBO_W_PLUS_WPOS, VectorSet,
                      combine, load_vectors, save_vectors)
from .vocab import (Vocabulary, build_vocab, encode_corpus, iter_sentences,
                    subsample_corpus, subsample_stream)

__version__ = "0.1.0"
