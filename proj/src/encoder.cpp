#include "srkpa/encoder.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "srkpa/errors.hpp"

namespace srkpa {

VarLayout::VarLayout(int rounds, int rows, int cols, int word_bits, int pairs)
    : rounds_(rounds), words_(rows * cols), word_bits_(word_bits), pairs_(pairs) {
  if (rounds < 1) throw std::invalid_argument("VarLayout: rounds must be >= 1");
  if (pairs < 1) throw std::invalid_argument("VarLayout: at least one text pair required");
  if (rows < 1 || cols < 1 || word_bits < 1) throw std::invalid_argument("VarLayout: bad state shape");
}

int VarLayout::key_var(int round, int word, int bit) const {
  return 1 + (round * words_ + word) * word_bits_ + bit;
}

int VarLayout::state_var(int pair, int slot, int word, int bit) const {
  const int per_pair = block_bits() * (2 * rounds_ - 1);
  return 1 + key_var_count() + pair * per_pair + slot * block_bits() + word * word_bits_ + bit;
}

int VarLayout::sbox_input_var(int pair, int round, int word, int bit) const {
  if (round < 2 || round > rounds_) throw std::out_of_range("sbox_input_var: round must be 2..n");
  return state_var(pair, 2 * round - 3, word, bit);
}

int VarLayout::sbox_output_var(int pair, int round, int word, int bit) const {
  if (round < 1 || round > rounds_) throw std::out_of_range("sbox_output_var: round must be 1..n");
  return state_var(pair, 2 * (round - 1), word, bit);
}

std::int64_t num_vars(int rounds, int rows, int cols, int word_bits, int pairs) {
  const std::int64_t b = std::int64_t{rows} * cols * word_bits;
  return b * (rounds + 1) + std::int64_t{pairs} * b * (2 * rounds - 1);
}

std::string InstanceSpec::token() const {
  return std::to_string(params.rounds) + "-" + key_token + "-" + std::to_string(pair_count());
}

InstanceSpec make_instance_spec(const CipherParams& params, std::string key_token, const State& secret_key,
                                const std::vector<State>& plaintexts) {
  if (plaintexts.empty()) throw std::invalid_argument("at least one plaintext required");
  for (std::size_t i = 0; i < plaintexts.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (plaintexts[i] == plaintexts[j])
        throw std::invalid_argument("duplicate plaintext " + plaintexts[i].to_hex(params.word_bits));
  const SmallScaleAes cipher(params);
  const KeyMaterial km = cipher.expand_key(secret_key);
  InstanceSpec spec{params, std::move(key_token), secret_key, {}};
  for (const State& p : plaintexts) spec.pairs.push_back({p, cipher.encrypt(p, km).ciphertext});
  return spec;
}

// ---------------------------------------------------------------------------
// metadata

namespace {

std::string join_ints(const auto& values, char sep) {
  std::string out;
  for (auto v : values) {
    if (!out.empty()) out.push_back(sep);
    out += std::to_string(static_cast<unsigned>(v));
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

unsigned parse_uint(const std::string& s, const std::string& what) {
  unsigned v = 0;
  int base = 10;
  std::string_view text = s;
  if (text.starts_with("0x")) {
    base = 16;
    text.remove_prefix(2);
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v, base);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw InputError("metadata: bad integer for " + what + ": '" + s + "'");
  return v;
}

}  // namespace

const std::string* find_meta(const Metadata& meta, const std::string& key) {
  for (const auto& [k, v] : meta)
    if (k == key) return &v;
  return nullptr;
}

Metadata instance_metadata(const InstanceSpec& spec) {
  const CipherParams& p = spec.params;
  Metadata m;
  m.emplace_back("format", "srkpa-kpa");
  m.emplace_back("generator", "srkpa 1.0");
  m.emplace_back("token", spec.token());
  m.emplace_back("rounds", std::to_string(p.rounds));
  m.emplace_back("rows", std::to_string(p.rows));
  m.emplace_back("cols", std::to_string(p.cols));
  m.emplace_back("word_bits", std::to_string(p.word_bits));
  m.emplace_back("pairs", std::to_string(spec.pair_count()));
  m.emplace_back("key_token", spec.key_token);
  {
    std::ostringstream mod;
    mod << "0x" << std::hex << p.modulus;
    m.emplace_back("modulus", mod.str());
  }
  std::string mix;
  for (const auto& row : p.mix_matrix) {
    if (!mix.empty()) mix.push_back(';');
    mix += join_ints(row, ',');
  }
  m.emplace_back("mix", mix);
  m.emplace_back("affine", join_ints(p.affine_rows, ','));
  m.emplace_back("affine_const", std::to_string(p.affine_const));
  m.emplace_back("rcon_base", std::to_string(p.rcon_base));
  for (std::size_t i = 0; i < spec.pairs.size(); ++i)
    m.emplace_back("pair." + std::to_string(i),
                   spec.pairs[i].plaintext.to_hex(p.word_bits) + ":" + spec.pairs[i].ciphertext.to_hex(p.word_bits));
  return m;
}

InstanceSpec spec_from_metadata(const Metadata& meta) {
  auto need = [&](const std::string& key) -> const std::string& {
    const std::string* v = find_meta(meta, key);
    if (!v) throw InputError("metadata: missing '" + key + "'");
    return *v;
  };
  auto need_int = [&](const std::string& key) { return static_cast<int>(parse_uint(need(key), key)); };

  InstanceSpec spec;
  CipherParams& p = spec.params;
  p.rounds = need_int("rounds");
  p.rows = need_int("rows");
  p.cols = need_int("cols");
  p.word_bits = need_int("word_bits");
  p.modulus = parse_uint(need("modulus"), "modulus");
  for (const auto& row : split(need("mix"), ';')) {
    std::vector<Word> r;
    for (const auto& v : split(row, ',')) r.push_back(static_cast<Word>(parse_uint(v, "mix")));
    p.mix_matrix.push_back(std::move(r));
  }
  for (const auto& v : split(need("affine"), ',')) p.affine_rows.push_back(parse_uint(v, "affine"));
  p.affine_const = static_cast<Word>(need_int("affine_const"));
  p.rcon_base = static_cast<Word>(need_int("rcon_base"));
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("metadata: invalid cipher parameters: ") + e.what());
  }
  spec.key_token = need("key_token");
  const int pairs = need_int("pairs");
  for (int i = 0; i < pairs; ++i) {
    const std::string& text = need("pair." + std::to_string(i));
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw InputError("metadata: pair." + std::to_string(i) + " lacks ':'");
    spec.pairs.push_back({State::from_hex(text.substr(0, colon), p), State::from_hex(text.substr(colon + 1), p)});
  }
  if (const std::string* key = find_meta(meta, "key")) spec.secret_key = State::from_hex(*key, p);
  return spec;
}

// ---------------------------------------------------------------------------
// clause generation

namespace {

void minimize_in_place(ClauseList& block) {
  std::set<std::vector<Literal>> current;
  auto by_var = [](Literal a, Literal b) { return var_of(a) < var_of(b) || (var_of(a) == var_of(b) && a < b); };
  for (auto clause : block) {
    std::vector<Literal> c(clause.begin(), clause.end());
    std::sort(c.begin(), c.end(), by_var);
    current.insert(std::move(c));
  }
  for (bool changed = true; changed;) {
    changed = false;
    std::set<std::vector<Literal>> next;
    std::set<std::vector<Literal>> used;
    for (const auto& c : current) {
      if (used.count(c)) continue;
      bool merged = false;
      for (std::size_t i = 0; i < c.size() && !merged && c.size() > 1; ++i) {
        auto partner = c;
        partner[i] = -partner[i];
        std::sort(partner.begin(), partner.end(), by_var);
        if (partner != c && current.count(partner) && !used.count(partner)) {
          auto resolvent = c;
          resolvent.erase(resolvent.begin() + static_cast<std::ptrdiff_t>(i));
          used.insert(c);
          used.insert(partner);
          next.insert(std::move(resolvent));
          merged = changed = true;
        }
      }
      if (!merged) next.insert(c);
    }
    for (const auto& c : used) next.erase(c);
    current = std::move(next);
  }
  ClauseList out;
  for (const auto& c : current) out.add(c);
  block = std::move(out);
}

void emit_block(ClauseList& out, ClauseList block, const EncoderOptions& options) {
  if (options.minimize) minimize_in_place(block);
  out.append(block);
}

void check_layout(const InstanceSpec& spec, const VarLayout& layout) {
  const auto& p = spec.params;
  if (layout != VarLayout::for_params(p, spec.pair_count()))
    throw std::invalid_argument("layout does not match instance spec");
}

}  // namespace

std::vector<std::vector<int>> linear_dependencies(const SmallScaleAes& cipher) {
  const auto& p = cipher.params();
  const int e = p.word_bits;
  const int b = p.block_bits();
  std::vector<std::vector<int>> deps(static_cast<std::size_t>(b));
  for (int in_bit = 0; in_bit < b; ++in_bit) {
    State unit(p.rows, p.cols);
    unit[static_cast<std::size_t>(in_bit / e)] = static_cast<Word>(1u << (in_bit % e));
    const State image = cipher.linear(unit);
    for (int out_bit = 0; out_bit < b; ++out_bit)
      if (image.bit(static_cast<std::size_t>(out_bit / e), out_bit % e))
        deps[static_cast<std::size_t>(out_bit)].push_back(in_bit);
  }
  return deps;
}

ClauseList encode_key_schedule(const InstanceSpec& spec, const VarLayout& layout, const EncoderOptions& options) {
  check_layout(spec, layout);
  const SmallScaleAes cipher(spec.params);
  const auto& p = spec.params;
  const int e = p.word_bits;
  const int r = p.rows;
  const int c = p.cols;
  // the relation over (last column word, first word, next first word) is
  // written out clause by clause, 2^(3e) rows
  if (3 * e > kMaxKeyRelationBits)
    throw std::invalid_argument("key schedule relation over " + std::to_string(3 * e) +
                                " bits is too large for a direct encoding (word_bits <= 6)");
  const auto sbox = cipher.sbox();
  const std::uint32_t mask = (1u << e) - 1;
  auto word = [r](int row, int col) { return col * r + row; };

  ClauseList out;
  std::vector<Term> positions;
  for (int step = 0; step < p.rounds; ++step) {
    const Word rc = cipher.round_constant(step);
    for (int row = 0; row < r; ++row) {
      positions.clear();
      for (int j = 0; j < e; ++j) positions.push_back(Term::var(layout.key_var(step, word((row + 1) % r, c - 1), j)));
      for (int j = 0; j < e; ++j) positions.push_back(Term::var(layout.key_var(step, word(row, 0), j)));
      for (int j = 0; j < e; ++j) positions.push_back(Term::var(layout.key_var(step + 1, word(row, 0), j)));
      const Word konst = row == 0 ? rc : 0;
      ClauseList block;
      emit_relation(block, positions, [&](std::uint32_t a) {
        const std::uint32_t in = a & mask, prev = (a >> e) & mask, next = a >> (2 * e);
        return next == (prev ^ sbox[in] ^ konst);
      });
      emit_block(out, std::move(block), options);
    }
    for (int col = 1; col < c; ++col)
      for (int row = 0; row < r; ++row)
        for (int j = 0; j < e; ++j) {
          const Literal lits[] = {layout.key_var(step + 1, word(row, col), j), layout.key_var(step, word(row, col), j),
                                  layout.key_var(step + 1, word(row, col - 1), j)};
          out.append(xor_clause_expansion(lits, false, options.max_xor_arity));
        }
  }
  return out;
}

namespace {

ClauseList encode_pair_with(const InstanceSpec& spec, const VarLayout& layout, int q, const SmallScaleAes& cipher,
                            const std::vector<std::vector<int>>& deps, const EncoderOptions& options) {
  const auto& p = spec.params;
  const int e = p.word_bits;
  const int n = p.rounds;
  const int words = p.words();
  const int b = p.block_bits();
  const TextPair& pair = spec.pairs.at(static_cast<std::size_t>(q));

  ClauseList out;
  std::vector<Term> in(static_cast<std::size_t>(e));
  std::vector<Literal> outs(static_cast<std::size_t>(e));
  std::vector<Literal> xor_lits;
  for (int round = 1; round <= n; ++round) {
    for (int w = 0; w < words; ++w) {
      for (int j = 0; j < e; ++j) {
        if (round == 1) {
          const Literal k = layout.key_var(0, w, j);
          in[j] = Term::var(pair.plaintext.bit(static_cast<std::size_t>(w), j) ? -k : k);
        } else {
          in[j] = Term::var(layout.sbox_input_var(q, round, w, j));
        }
        outs[j] = layout.sbox_output_var(q, round, w, j);
      }
      emit_block(out, sbox_relation_clauses(cipher.sbox(), in, outs), options);
    }
    for (int bit = 0; bit < b; ++bit) {
      const int w = bit / e, j = bit % e;
      xor_lits.clear();
      bool parity = false;
      if (round < n)
        xor_lits.push_back(layout.sbox_input_var(q, round + 1, w, j));
      else
        parity = pair.ciphertext.bit(static_cast<std::size_t>(w), j);
      for (int d : deps[static_cast<std::size_t>(bit)]) xor_lits.push_back(layout.sbox_output_var(q, round, d / e, d % e));
      xor_lits.push_back(layout.key_var(round, w, j));
      out.append(xor_clause_expansion(xor_lits, parity, options.max_xor_arity));
    }
  }
  return out;
}

}  // namespace

ClauseList encode_pair(const InstanceSpec& spec, const VarLayout& layout, int pair, const EncoderOptions& options) {
  check_layout(spec, layout);
  const SmallScaleAes cipher(spec.params);
  return encode_pair_with(spec, layout, pair, cipher, linear_dependencies(cipher), options);
}

ClauseList encode_rounds(const InstanceSpec& spec, const VarLayout& layout, const EncoderOptions& options) {
  check_layout(spec, layout);
  const SmallScaleAes cipher(spec.params);
  const auto deps = linear_dependencies(cipher);
  const int pairs = spec.pair_count();
  std::vector<ClauseList> blocks(static_cast<std::size_t>(pairs));
  const int workers = std::clamp(options.workers, 1, pairs);
  if (workers == 1) {
    for (int q = 0; q < pairs; ++q) blocks[q] = encode_pair_with(spec, layout, q, cipher, deps, options);
  } else {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    {
      std::vector<std::jthread> pool;
      for (int t = 0; t < workers; ++t)
        pool.emplace_back([&, t] {
          try {
            for (int q = t; q < pairs; q += workers) blocks[q] = encode_pair_with(spec, layout, q, cipher, deps, options);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
    }
    for (auto& err : errors)
      if (err) std::rethrow_exception(err);
  }
  ClauseList out;
  for (const auto& block : blocks) out.append(block);
  return out;
}

CnfInstance encode_instance(const InstanceSpec& spec, const EncoderOptions& options) {
  const VarLayout layout = VarLayout::for_params(spec.params, spec.pair_count());
  CnfInstance cnf;
  cnf.layout = layout;
  cnf.num_vars = layout.total();
  cnf.clauses = encode_key_schedule(spec, layout, options);
  cnf.clauses.append(encode_rounds(spec, layout, options));
  cnf.token = spec.token();
  cnf.metadata = instance_metadata(spec);
  if (spec.secret_key) cnf.secret_key_hex = spec.secret_key->to_hex(spec.params.word_bits);
  return cnf;
}

CnfInstance generate_instance(const CipherParams& params, const State& secret_key, const std::vector<State>& plaintexts,
                              std::string key_token, const EncoderOptions& options) {
  return encode_instance(make_instance_spec(params, std::move(key_token), secret_key, plaintexts), options);
}

Assignment witness_assignment(const InstanceSpec& spec, const VarLayout& layout) {
  check_layout(spec, layout);
  if (!spec.secret_key) throw std::invalid_argument("witness_assignment: instance has no secret key");
  const SmallScaleAes cipher(spec.params);
  const KeyMaterial km = cipher.expand_key(*spec.secret_key);
  const int e = spec.params.word_bits;
  const int words = spec.params.words();
  Assignment a(layout.total());
  for (int round = 0; round <= spec.params.rounds; ++round)
    for (int w = 0; w < words; ++w)
      for (int j = 0; j < e; ++j)
        a.set(layout.key_var(round, w, j), km.round_keys[static_cast<std::size_t>(round)].bit(static_cast<std::size_t>(w), j));
  for (int q = 0; q < spec.pair_count(); ++q) {
    const auto trace = cipher.encrypt(spec.pairs[static_cast<std::size_t>(q)].plaintext, km);
    for (int round = 1; round <= spec.params.rounds; ++round)
      for (int w = 0; w < words; ++w)
        for (int j = 0; j < e; ++j) {
          const auto idx = static_cast<std::size_t>(round - 1);
          a.set(layout.sbox_output_var(q, round, w, j), trace.sbox_outputs[idx].bit(static_cast<std::size_t>(w), j));
          if (round >= 2)
            a.set(layout.sbox_input_var(q, round, w, j), trace.sbox_inputs[idx].bit(static_cast<std::size_t>(w), j));
        }
  }
  return a;
}

State key_from_assignment(const Assignment& assignment, const VarLayout& layout, const CipherParams& params) {
  State key(params.rows, params.cols);
  for (int w = 0; w < params.words(); ++w) {
    unsigned v = 0;
    for (int j = 0; j < params.word_bits; ++j)
      if (assignment.value(layout.key_var(0, w, j))) v |= 1u << j;
    key[static_cast<std::size_t>(w)] = static_cast<Word>(v);
  }
  return key;
}

bool key_matches_pairs(const InstanceSpec& spec, const State& key) {
  const SmallScaleAes cipher(spec.params);
  const KeyMaterial km = cipher.expand_key(key);
  return std::all_of(spec.pairs.begin(), spec.pairs.end(),
                     [&](const TextPair& tp) { return cipher.encrypt(tp.plaintext, km).ciphertext == tp.ciphertext; });
}

}  // namespace srkpa
