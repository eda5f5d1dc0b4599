#include "rankmat/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <unordered_set>

namespace rankmat {

std::uint32_t IdMap::add(std::int64_t external_id) {
  auto [it, inserted] =
      index_.try_emplace(external_id, static_cast<std::uint32_t>(ids_.size()));
  if (inserted) ids_.push_back(external_id);
  return it->second;
}

std::uint32_t IdMap::index_of(std::int64_t external_id) const {
  auto it = index_.find(external_id);
  if (it == index_.end())
    throw std::out_of_range("unknown id " + std::to_string(external_id));
  return it->second;
}

bool IdMap::contains(std::int64_t external_id) const {
  return index_.contains(external_id);
}

RatingDataset::RatingDataset(std::shared_ptr<const IdMap> users,
                             std::shared_ptr<const IdMap> items,
                             std::vector<Rating> ratings, double rating_min,
                             double rating_max)
    : users_(std::move(users)),
      items_(std::move(items)),
      ratings_(std::move(ratings)),
      rating_min_(rating_min),
      rating_max_(rating_max) {
  if (!users_ || !items_) throw std::invalid_argument("dataset: null id map");
  if (!(rating_min_ <= rating_max_))
    throw std::invalid_argument("dataset: rating_min > rating_max");
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(ratings_.size());
  for (const Rating& r : ratings_) {
    if (r.user >= users_->size() || r.item >= items_->size())
      throw std::invalid_argument("dataset: index out of range");
    if (!(r.value >= rating_min_ && r.value <= rating_max_))
      throw std::invalid_argument("dataset: rating outside [min, max]");
    const std::uint64_t key = (std::uint64_t{r.user} << 32) | r.item;
    if (!seen.insert(key).second)
      throw std::invalid_argument("dataset: duplicate (user, item) pair");
  }
}

RatingDataset RatingDataset::with_ratings(std::vector<Rating> ratings) const {
  return RatingDataset(users_, items_, std::move(ratings), rating_min_,
                       rating_max_);
}

namespace {

[[noreturn]] void fail_at(std::string_view source, std::size_t line,
                          const std::string& what) {
  std::ostringstream os;
  os << source << ":" << line << ": " << what;
  throw std::runtime_error(os.str());
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view field, T& out) {
  field = trim(field);
  if (field.empty()) return false;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

}  // namespace

RatingDataset parse_ratings(std::string_view text, std::string_view source) {
  // UTF-8 byte order mark
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  auto users = std::make_shared<IdMap>();
  auto items = std::make_shared<IdMap>();
  std::vector<Rating> ratings;
  std::unordered_set<std::uint64_t> seen;
  double lo = 0.0, hi = 0.0;
  bool header_seen = false;

  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;

    std::string_view fields[4];
    std::size_t count = 0;
    std::string_view rest = line;
    while (true) {
      const std::size_t comma = rest.find(',');
      if (count < 4) fields[count] = rest.substr(0, comma);
      ++count;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }

    if (!header_seen) {
      header_seen = true;
      std::int64_t probe = 0;
      if (count >= 1 && parse_number(fields[0], probe))
        fail_at(source, line_no, "expected a header row, found data");
      continue;
    }

    if (count != 4)
      fail_at(source, line_no,
              "expected 4 columns, found " + std::to_string(count));
    std::int64_t user_id = 0, item_id = 0;
    double value = 0.0;
    if (!parse_number(fields[0], user_id))
      fail_at(source, line_no, "non-integer userId");
    if (!parse_number(fields[1], item_id))
      fail_at(source, line_no, "non-integer movieId");
    if (!parse_number(fields[2], value) || !std::isfinite(value))
      fail_at(source, line_no, "non-numeric rating");
    if (value < 0.0) fail_at(source, line_no, "negative rating");

    const std::uint32_t u = users->add(user_id);
    const std::uint32_t i = items->add(item_id);
    if (!seen.insert((std::uint64_t{u} << 32) | i).second)
      fail_at(source, line_no, "duplicate (userId, movieId) pair");
    if (ratings.empty()) {
      lo = hi = value;
    } else {
      lo = std::min(lo, value);
      hi = std::max(hi, value);
    }
    ratings.push_back({u, i, value});
  }

  if (ratings.empty())
    throw std::runtime_error(std::string(source) + ": no ratings");
  return RatingDataset(std::move(users), std::move(items), std::move(ratings),
                       lo, hi);
}

RatingDataset load_ratings(const std::filesystem::path& path,
                           RatingFormat format) {
  if (format != RatingFormat::movielens_csv)
    throw std::invalid_argument("unsupported rating format");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_ratings(buf.str(), path.string());
}

SplitPair split(const RatingDataset& dataset, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0))
    throw std::invalid_argument("split ratio must lie in (0, 1)");
  if (dataset.empty()) throw std::invalid_argument("split of empty dataset");

  const auto ratings = dataset.ratings();
  std::vector<std::vector<std::size_t>> by_user(dataset.user_count());
  for (std::size_t t = 0; t < ratings.size(); ++t)
    by_user[ratings[t].user].push_back(t);

  std::vector<char> in_train(ratings.size(), 0);
  for (std::size_t u = 0; u < by_user.size(); ++u) {
    auto& rows = by_user[u];
    if (rows.empty()) continue;
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(u)};
    std::mt19937_64 rng(seq);
    std::shuffle(rows.begin(), rows.end(), rng);
    // ratio * count carries representation error (0.7 * 10 > 7), so shave it
    // before rounding up.
    const auto keep = static_cast<std::size_t>(
        std::ceil(ratio * static_cast<double>(rows.size()) - 1e-9));
    for (std::size_t r = 0; r < std::clamp<std::size_t>(keep, 1, rows.size()); ++r)
      in_train[rows[r]] = 1;
  }

  std::vector<Rating> train, test;
  for (std::size_t t = 0; t < ratings.size(); ++t)
    (in_train[t] ? train : test).push_back(ratings[t]);
  return SplitPair{dataset.with_ratings(std::move(train)),
                   dataset.with_ratings(std::move(test)), seed, ratio};
}

}  // namespace rankmat
