#pragma once

// Umbrella header for the fake-conversation detection and concept-drift
// classification library.

#include "convdrift/bench.hpp"
#include "convdrift/corpus.hpp"
#include "convdrift/drift.hpp"
#include "convdrift/embedding.hpp"
#include "convdrift/ensemble.hpp"
#include "convdrift/errors.hpp"
#include "convdrift/judge.hpp"
#include "convdrift/kde.hpp"
#include "convdrift/kernel.hpp"
#include "convdrift/kmeans.hpp"
#include "convdrift/knn.hpp"
#include "convdrift/math.hpp"
#include "convdrift/metrics.hpp"
#include "convdrift/naive_bayes.hpp"
#include "convdrift/ocsvm.hpp"
#include "convdrift/pca.hpp"
#include "convdrift/persist.hpp"
#include "convdrift/pipeline.hpp"
#include "convdrift/random.hpp"
#include "convdrift/svm.hpp"
#include "convdrift/synth.hpp"
#include "convdrift/tfidf.hpp"
#include "convdrift/tokenizer.hpp"
#include "convdrift/types.hpp"
