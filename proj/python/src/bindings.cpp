// Batched oracle supervision over flat integer arrays.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynoracle/oracle_approx.hpp"
#include "dynoracle/oracle_exact.hpp"

namespace py = pybind11;

namespace {

using namespace dynoracle;
using IdArray = py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>;

constexpr const char* kMetrics[] = {"f1-exact", "f1-partial", "wer", "rouge2", "bleu4"};

// std::invalid_argument reaches Python as ValueError.
[[noreturn]] void item_error(std::size_t item, const std::string& what) {
  throw std::invalid_argument("item " + std::to_string(item) + ": " + what);
}

struct Slices {
  std::vector<std::size_t> offsets;  // size n + 1
};

Slices slice(const IdArray& lengths, std::size_t total, const char* name) {
  Slices s{{0}};
  const auto len = lengths.unchecked<1>();
  for (py::ssize_t i = 0; i < len.shape(0); ++i) {
    if (len(i) < 0) item_error(i, std::string("negative ") + name + " length");
    s.offsets.push_back(s.offsets.back() + static_cast<std::size_t>(len(i)));
    if (s.offsets.back() > total)
      item_error(i, std::string(name) + " lengths exceed the id array");
  }
  if (s.offsets.back() != total)
    throw py::value_error(std::string(name) + " lengths sum to " +
                          std::to_string(s.offsets.back()) + " but the id array has " +
                          std::to_string(total) + " ids");
  return s;
}

// Tag ids: 0 is O, 2k+1 is B of type k, 2k+2 is I of type k.
Tag tag_of(std::int64_t id) {
  if (id == 0) return Tag::outside();
  const std::string type = "T" + std::to_string((id - 1) / 2);
  return id % 2 ? Tag::begin(type) : Tag::inside(type);
}

std::int64_t id_of(const Tag& tag) {
  if (tag.is_outside()) return 0;
  const std::int64_t k = std::stoll(tag.type.substr(1));
  return 2 * k + (tag.kind == TagKind::Begin ? 1 : 2);
}

py::array_t<std::int64_t> oracle_next_batch(const IdArray& prefix_ids,
                                            const IdArray& prefix_lengths,
                                            const IdArray& gold_ids,
                                            const IdArray& gold_lengths,
                                            const std::string& metric, std::int64_t vocab_size,
                                            std::size_t beam_size, std::size_t beam_length) {
  if (prefix_ids.ndim() != 1 || gold_ids.ndim() != 1 || prefix_lengths.ndim() != 1 ||
      gold_lengths.ndim() != 1)
    throw py::value_error("all arrays must be one-dimensional");
  if (prefix_lengths.shape(0) != gold_lengths.shape(0))
    throw py::value_error("prefix and gold batches differ in size");
  if (vocab_size <= 0) throw py::value_error("vocab_size must be positive");
  bool known = false;
  for (const char* m : kMetrics) known = known || metric == m;
  if (!known) throw py::value_error("unknown metric: " + metric);
  BeamConfig cfg;
  cfg.beam_size = beam_size;
  cfg.beam_length = beam_length;
  cfg.metric = metric == "rouge2" ? ApproxMetric::Rouge2F1 : ApproxMetric::Bleu4;
  validate(cfg);

  const Slices ps = slice(prefix_lengths, prefix_ids.shape(0), "prefix");
  const Slices gs = slice(gold_lengths, gold_ids.shape(0), "gold");
  const std::size_t n = ps.offsets.size() - 1;
  const std::int64_t* pdata = prefix_ids.data();
  const std::int64_t* gdata = gold_ids.data();

  std::vector<std::int64_t> result(n);
  {
    py::gil_scoped_release release;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::int64_t> prefix(pdata + ps.offsets[i], pdata + ps.offsets[i + 1]);
      std::vector<std::int64_t> gold(gdata + gs.offsets[i], gdata + gs.offsets[i + 1]);
      for (const auto* seq : {&prefix, &gold})
        for (std::int64_t id : *seq)
          if (id < 0 || id >= vocab_size)
            item_error(i, "id " + std::to_string(id) + " outside [0, vocab_size)");
      if (metric == "f1-exact" || metric == "f1-partial") {
        if (prefix.size() > gold.size()) item_error(i, "prefix longer than gold");
        if (prefix.size() == gold.size()) {
          result[i] = vocab_size;
          continue;
        }
        TagSeq pt, gt;
        for (auto id : prefix) pt.push_back(tag_of(id));
        for (auto id : gold) gt.push_back(tag_of(id));
        const auto oracle =
            tag_oracle_for(metric == "f1-exact" ? TagMetric::ExactF1 : TagMetric::PartialF1);
        result[i] = id_of(complete_tags(oracle, gt, pt)[prefix.size()]);
        continue;
      }
      const TokenSeq p(prefix.begin(), prefix.end());
      const TokenSeq g(gold.begin(), gold.end());
      const std::optional<TokenId> next =
          metric == "wer" ? wer_oracle_next(g, p) : select_supervision(p, g, cfg).next_token;
      result[i] = next ? static_cast<std::int64_t>(*next) : vocab_size;
    }
  }
  return py::array_t<std::int64_t>(static_cast<py::ssize_t>(n), result.data());
}

std::string version_info() {
  std::string out = std::string("dynoracle ") + DYNORACLE_VERSION + "; metrics:";
  for (const char* m : kMetrics) out += std::string(" ") + m;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dynamic-oracle supervision for training loops.";
  m.def("oracle_next_batch", &oracle_next_batch, py::arg("prefix_ids"),
        py::arg("prefix_lengths"), py::arg("gold_ids"), py::arg("gold_lengths"),
        py::arg("metric"), py::arg("vocab_size"), py::arg("beam_size") = 5,
        py::arg("beam_length") = 4,
        "Next supervision id per item; vocab_size encodes End.");
  m.def("version_info", &version_info, "Core version and available metrics.");
}
