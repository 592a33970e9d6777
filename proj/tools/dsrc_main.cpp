// tools/dsrc_main.cpp
//
// Copyright 2026 The dsrc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command-line front end: quantizer training, encode, decode, voice
// conversion, F0 flattening, and analysis reports.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dsrc/audio.hpp"
#include "dsrc/bitstream.hpp"
#include "dsrc/common.hpp"
#include "dsrc/features.hpp"
#include "dsrc/losses.hpp"
#include "dsrc/metrics.hpp"
#include "dsrc/pitch.hpp"
#include "dsrc/quantize.hpp"
#include "dsrc/runconfig.hpp"
#include "dsrc/tensor.hpp"
#include "dsrc/vocoder.hpp"

namespace {

// Exit codes: 1 usage, 2 missing file, 3 config/codebook mismatch,
// 4 malformed data, 5 other failure.
enum ExitCode {
  kOk = 0,
  kUsage = 1,
  kMissingFile = 2,
  kMismatch = 3,
  kBadData = 4,
  kFailure = 5,
};

dsrc::RunConfig load_cfg(const std::string& path) {
  return path.empty() ? dsrc::RunConfig{} : dsrc::load_run_config(path);
}

bool is_random_spec(const std::string& s) { return s.rfind("random:", 0) == 0; }

// "random:SEED" or "random:SEED:N" -> (SEED, N)
std::pair<std::uint64_t, int> parse_random_spec(const std::string& s,
                                                int default_n) {
  const std::string rest = s.substr(7);
  const std::size_t colon = rest.find(':');
  std::uint64_t seed = 0;
  int n = default_n;
  try {
    seed = std::stoull(rest.substr(0, colon));
    if (colon != std::string::npos) n = std::stoi(rest.substr(colon + 1));
  } catch (const std::exception&) {
    throw dsrc::Error("bad random spec \"" + s +
                      "\"; expected random:SEED or random:SEED:N");
  }
  return {seed, n};
}

dsrc::Generator make_generator(const dsrc::GeneratorConfig& cfg,
                               const std::string& spec) {
  DSRC_CHECK_DIM(!spec.empty(),
                 "no generator weights configured (paths.generator or "
                 "--generator)");
  if (is_random_spec(spec)) {
    const auto [seed, unused] = parse_random_spec(spec, 0);
    return dsrc::Generator(cfg, dsrc::random_generator_weights(cfg, seed));
  }
  return dsrc::Generator::load(spec, cfg);
}

dsrc::SpeakerTable make_speakers(const std::string& spec) {
  DSRC_CHECK_DIM(!spec.empty(),
                 "no speaker table configured (paths.speaker_table or "
                 "--speakers)");
  if (is_random_spec(spec)) {
    const auto [seed, n] = parse_random_spec(spec, 8);
    return dsrc::make_random_speaker_table(n, seed);
  }
  return dsrc::load_speaker_table(spec);
}

std::string stem_of(const std::string& path) {
  const std::size_t dot = path.find_last_of('.');
  const std::size_t slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path;
  return path.substr(0, dot);
}

std::string format_bps(double v) {
  if (v == std::floor(v)) return std::to_string(static_cast<long long>(v));
  std::ostringstream os;
  os << v;
  return os.str();
}

// Generator config matching a decoded stream header.
dsrc::GeneratorConfig generator_config_for(const dsrc::RunConfig& rc,
                                           const dsrc::StreamHeader& h) {
  dsrc::GeneratorConfig cfg = rc.generator;
  cfg.content_vocab = h.content_vocab;
  cfg.f0_vocab = h.f0_vocab;
  int prod = 1;
  for (int r : cfg.upsample_rates) prod *= r;
  if (prod != h.content_hop)
    cfg.upsample_rates = dsrc::upsample_rates_for_hop(h.content_hop);
  prod = 1;
  for (int r : cfg.upsample_rates) prod *= r;
  DSRC_CHECK_DIM(prod == h.content_hop, "generator upsample rates multiply to ",
                 prod, " but the stream's content hop is ", h.content_hop);
  return cfg;
}

// ---------------------------------------------------------------------------
// shared encode pipeline (encode and flatten-f0)

struct EncodeArgs {
  std::string config;
  std::string input;
  std::string output;
  std::string features_path;
  std::string content_codebook;
  std::string f0_codebook;
  int speaker_id = 0;
  bool flatten = false;
  double flatten_mean = 0.0;  // 0: use the utterance's own voiced mean
};

void run_encode(const EncodeArgs& args) {
  const dsrc::RunConfig rc = load_cfg(args.config);
  const dsrc::AudioClip clip = dsrc::load_audio(args.input);
  DSRC_CHECK_DIM(clip.sample_rate == rc.codec.sample_rate,
                 "input is at ", clip.sample_rate, " Hz but the codec expects ",
                 rc.codec.sample_rate, " Hz");

  // content units
  const std::string cb_path = !args.content_codebook.empty()
                                  ? args.content_codebook
                                  : rc.content_codebook;
  DSRC_CHECK_DIM(!cb_path.empty(), "no content codebook configured "
                 "(paths.content_codebook or --content-codebook)");
  const dsrc::Codebook content_cb = dsrc::load_codebook(cb_path);
  dsrc::FeatureSequence feats;
  if (!args.features_path.empty()) {
    feats = dsrc::load_features(args.features_path);
  } else {
    const int hop = rc.feature_hop > 0 ? rc.feature_hop : rc.codec.content_hop;
    feats = dsrc::baseline_features(clip, hop);
  }
  const dsrc::UnitSequence content = dsrc::quantize(feats, content_cb);

  // F0 codes
  const std::string f0cb_path =
      !args.f0_codebook.empty() ? args.f0_codebook : rc.f0_codebook;
  DSRC_CHECK_DIM(!f0cb_path.empty(),
                 "no F0 codebook configured (paths.f0_codebook or "
                 "--f0-codebook)");
  const dsrc::Codebook f0_cb = dsrc::load_codebook(f0cb_path);
  dsrc::F0Track track = dsrc::extract_f0(clip, rc.pitch);
  if (args.flatten) {
    const double mean = args.flatten_mean > 0.0
                            ? args.flatten_mean
                            : dsrc::speaker_mean_f0(track);
    track = dsrc::flatten_f0(track, mean);
    std::cout << "flattened F0 to " << mean << " Hz\n";
  }
  dsrc::F0CodeSequence f0 = dsrc::f0_encode(track, f0_cb);

  // The stream carries ceil(L / f0_group) F0 codes; windowing edge effects
  // can leave the extracted sequence a code short or long.
  const std::size_t want =
      (content.codes.size() + rc.codec.f0_group - 1) / rc.codec.f0_group;
  DSRC_CHECK(!f0.codes.empty(), "no F0 codes extracted");
  if (f0.codes.size() > want) f0.codes.resize(want);
  while (f0.codes.size() < want) f0.codes.push_back(f0.codes.back());
  f0.frame_rate = rc.codec.f0_frame_rate();

  const dsrc::Bitstream stream = dsrc::encode_stream(
      content, f0, static_cast<std::uint16_t>(args.speaker_id), rc.codec);
  const std::string out =
      args.output.empty() ? stem_of(args.input) + ".dsrc" : args.output;
  dsrc::save_stream(out, stream);

  const double duration = clip.duration_seconds();
  std::cout << "wrote " << out << ": " << content.codes.size()
            << " content frames, " << f0.codes.size() << " F0 codes, "
            << stream.bytes.size() << " bytes ("
            << 8.0 * stream.payload_bytes() / duration << " bps measured, "
            << format_bps(dsrc::bitrate(rc.codec).total_bps)
            << " bps nominal)\n";
}

// ---------------------------------------------------------------------------

void run_decode(const std::string& config, const std::string& input,
                std::string output, const std::string& generator_flag,
                const std::string& speakers_flag) {
  const dsrc::RunConfig rc = load_cfg(config);
  const dsrc::Bitstream stream = dsrc::load_stream(input);
  const dsrc::DecodedStream decoded = dsrc::decode_stream(stream.bytes);

  const dsrc::GeneratorConfig gen_cfg = generator_config_for(rc, decoded.header);
  const dsrc::Generator gen = make_generator(
      gen_cfg,
      !generator_flag.empty() ? generator_flag : rc.generator_weights);
  const dsrc::SpeakerTable speakers = make_speakers(
      !speakers_flag.empty() ? speakers_flag : rc.speaker_table);

  const dsrc::AudioClip out = gen.generate(
      decoded.content, decoded.f0, speakers.embedding(decoded.speaker_id));
  if (output.empty()) output = stem_of(input) + "_decoded.wav";
  dsrc::save_audio(output, out);
  std::cout << "wrote " << output << ": " << out.samples.size()
            << " samples at " << out.sample_rate << " Hz (speaker "
            << decoded.speaker_id << ")\n";
}

void run_convert(const std::string& config, const std::string& input,
                 std::string out_prefix, int speaker_id, int num_targets,
                 std::uint64_t seed, bool have_seed,
                 const std::string& generator_flag,
                 const std::string& speakers_flag) {
  const dsrc::RunConfig rc = load_cfg(config);
  const dsrc::Bitstream stream = dsrc::load_stream(input);
  const dsrc::DecodedStream decoded = dsrc::decode_stream(stream.bytes);

  const dsrc::GeneratorConfig gen_cfg = generator_config_for(rc, decoded.header);
  const dsrc::Generator gen = make_generator(
      gen_cfg,
      !generator_flag.empty() ? generator_flag : rc.generator_weights);
  const dsrc::SpeakerTable speakers = make_speakers(
      !speakers_flag.empty() ? speakers_flag : rc.speaker_table);

  std::vector<int> targets;
  if (speaker_id >= 0) {
    targets.push_back(speaker_id);
  } else {
    DSRC_CHECK(num_targets >= 1, "convert: need at least one target");
    DSRC_CHECK(num_targets <= speakers.num_speakers(),
               "convert: ", num_targets, " targets requested but the table "
               "has only ", speakers.num_speakers(), " speakers");
    std::mt19937_64 rng(have_seed ? seed : rc.seed);
    std::vector<int> ids(speakers.num_speakers());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
    for (int i = 0; i < num_targets; ++i) {  // partial Fisher-Yates
      const std::size_t j =
          i + dsrc::detail::next_index(rng, ids.size() - i);
      std::swap(ids[i], ids[j]);
      targets.push_back(ids[i]);
    }
  }

  if (out_prefix.empty()) out_prefix = stem_of(input);
  // only the header speaker id and the conditioning embedding change;
  // content and F0 codes pass through untouched
  for (int target : targets) {
    const dsrc::Bitstream converted =
        dsrc::encode_stream(decoded.content, decoded.f0,
                            static_cast<std::uint16_t>(target),
                            decoded.header.config());
    const std::string base = out_prefix + "_spk" + std::to_string(target);
    dsrc::save_stream(base + ".dsrc", converted);
    const dsrc::AudioClip out = gen.generate(decoded.content, decoded.f0,
                                             speakers.embedding(target));
    dsrc::save_audio(base + ".wav", out);
    std::cout << "wrote " << base << ".dsrc and " << base << ".wav\n";
  }
}

void run_analyze(const std::string& config, const std::string& stream_path,
                 const std::string& ref_path, const std::string& hyp_path,
                 const std::string& disc_flag) {
  const dsrc::RunConfig rc = load_cfg(config);

  const dsrc::BitrateBreakdown b = dsrc::bitrate(rc.codec);
  std::cout << "bitrate: content " << format_bps(b.content_bps) << " bps, F0 "
            << format_bps(b.f0_bps) << " bps, total "
            << format_bps(b.total_bps) << " bps\n";
  std::cout << "bitrate.content_bps\t" << format_bps(b.content_bps) << "\n"
            << "bitrate.f0_bps\t" << format_bps(b.f0_bps) << "\n"
            << "bitrate.total_bps\t" << format_bps(b.total_bps) << "\n";

  if (!stream_path.empty()) {
    const dsrc::Bitstream s = dsrc::load_stream(stream_path);
    const dsrc::StreamHeader& h = s.header;
    const double duration =
        static_cast<double>(h.num_content_frames) * h.content_hop /
        h.sample_rate;
    std::cout << "stream.frames\t" << h.num_content_frames << "\n"
              << "stream.speaker_id\t" << h.speaker_id << "\n"
              << "stream.bytes\t" << s.bytes.size() << "\n"
              << "stream.duration_s\t" << duration << "\n"
              << "stream.measured_bps\t"
              << 8.0 * s.payload_bytes() / duration << "\n";
  }

  if (!ref_path.empty() && !hyp_path.empty()) {
    const dsrc::AudioClip ref = dsrc::load_audio(ref_path);
    dsrc::AudioClip hyp = dsrc::load_audio(hyp_path);
    DSRC_CHECK_DIM(ref.sample_rate == hyp.sample_rate,
                   "analyze: sample rate mismatch between reference and "
                   "hypothesis");
    const dsrc::F0Track ref_f0 = dsrc::extract_f0(ref, rc.pitch);
    dsrc::F0Track hyp_f0 = dsrc::extract_f0(hyp, rc.pitch);
    const std::size_t frames = std::min(ref_f0.size(), hyp_f0.size());
    dsrc::F0Track ref_cut = ref_f0, hyp_cut = hyp_f0;
    ref_cut.f0.resize(frames);
    ref_cut.voiced.resize(frames);
    hyp_cut.f0.resize(frames);
    hyp_cut.voiced.resize(frames);
    std::cout << "vde\t" << dsrc::vde(ref_cut, hyp_cut) << "\n"
              << "ffe\t" << dsrc::ffe(ref_cut, hyp_cut) << "\n";

    const std::string disc_spec =
        !disc_flag.empty() ? disc_flag : rc.discriminator_weights;
    if (!disc_spec.empty()) {
      dsrc::AudioClip x = ref, x_hat = hyp;
      const std::size_t n = std::min(x.samples.size(), x_hat.samples.size());
      x.samples.resize(n);
      x_hat.samples.resize(n);
      dsrc::DiscriminatorConfig dcfg = rc.discriminator;
      dsrc::WeightMap weights;
      if (is_random_spec(disc_spec)) {
        const auto [dseed, unused] = parse_random_spec(disc_spec, 0);
        weights = dsrc::random_discriminator_weights(dcfg, dseed);
      } else {
        weights = dsrc::load_weights(disc_spec);
      }
      const dsrc::Discriminators disc(dcfg, std::move(weights));
      const auto real_stacks = disc.discriminate_all(x);
      const auto fake_stacks = disc.discriminate_all(x_hat);
      const dsrc::LossReport report = dsrc::total_losses(
          x, x_hat, real_stacks, fake_stacks, {}, rc.mel);
      std::cout << report.to_text();
    }
  }
}

void run_train_kmeans(const std::string& config,
                      const std::vector<std::string>& wavs,
                      const std::vector<std::string>& feature_files,
                      const std::string& out, int k, int max_iters, double tol,
                      std::uint64_t seed, bool have_seed) {
  const dsrc::RunConfig rc = load_cfg(config);
  std::vector<dsrc::FeatureSequence> all;
  for (const std::string& f : feature_files)
    all.push_back(dsrc::load_features(f));
  const int hop = rc.feature_hop > 0 ? rc.feature_hop : rc.codec.content_hop;
  for (const std::string& w : wavs) {
    const dsrc::AudioClip clip = dsrc::load_audio(w);
    all.push_back(dsrc::baseline_features(clip, hop));
  }
  DSRC_CHECK(!all.empty(), "train-kmeans: no input features or audio files");

  dsrc::KMeansOptions opt;
  opt.k = k > 0 ? k : rc.codec.content_vocab;
  opt.max_iters = max_iters;
  opt.tol = tol;
  opt.seed = have_seed ? seed : rc.seed;
  dsrc::KMeansStats stats;
  const dsrc::Codebook cb = dsrc::kmeans_fit(all, opt, &stats);
  dsrc::save_codebook(out, cb);
  std::cout << "wrote " << out << ": K=" << cb.k << " dim=" << cb.dim << ", "
            << stats.iterations << " iterations, inertia "
            << stats.inertia_per_iter.front() << " -> "
            << stats.inertia_per_iter.back() << "\n";
}

void run_train_f0vq(const std::string& config,
                    const std::vector<std::string>& wavs,
                    const std::vector<std::string>& f0_files,
                    const std::string& out, int k, int updates,
                    std::uint64_t seed, bool have_seed) {
  const dsrc::RunConfig rc = load_cfg(config);
  std::vector<float> batch;
  const int down = rc.f0_downsample;
  for (const std::string& f : f0_files) {
    const dsrc::F0Track t = dsrc::load_f0_track(f);
    const std::vector<float> b = dsrc::f0_window_batch(t, down);
    batch.insert(batch.end(), b.begin(), b.end());
  }
  for (const std::string& w : wavs) {
    const dsrc::AudioClip clip = dsrc::load_audio(w);
    const dsrc::F0Track t = dsrc::extract_f0(clip, rc.pitch);
    const std::vector<float> b = dsrc::f0_window_batch(t, down);
    batch.insert(batch.end(), b.begin(), b.end());
  }
  DSRC_CHECK(!batch.empty(), "train-f0vq: no input tracks or audio files");

  const int kk = k > 0 ? k : rc.codec.f0_vocab;
  const std::uint64_t s = have_seed ? seed : rc.seed;
  dsrc::Codebook cb =
      dsrc::codebook_from_batch(kk, 2 * down, batch, 0.99, 1.0, s);
  std::size_t restarts = 0;
  for (int i = 0; i < updates; ++i) {
    const dsrc::VqUpdateReport report = dsrc::vq_ema_update(cb, batch);
    restarts += report.restarted.size();
  }
  dsrc::save_codebook(out, cb);
  std::cout << "wrote " << out << ": K'=" << cb.k << " dim=" << cb.dim << ", "
            << updates << " updates, " << restarts << " restarts\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dsrc: ultra-low-bitrate discrete speech codec"};
  app.require_subcommand(1);

  // encode
  EncodeArgs enc;
  CLI::App* c_encode = app.add_subcommand("encode", "wav -> .dsrc stream");
  c_encode->add_option("input", enc.input, "input wav")->required();
  c_encode->add_option("--config", enc.config, "run config file");
  c_encode->add_option("--out", enc.output, "output .dsrc path");
  c_encode->add_option("--features", enc.features_path,
                       "precomputed feature file (FTRS) instead of the "
                       "baseline featurizer");
  c_encode->add_option("--content-codebook", enc.content_codebook,
                       "content codebook (CDBK)");
  c_encode->add_option("--f0-codebook", enc.f0_codebook, "F0 codebook (CDBK)");
  c_encode->add_option("--speaker-id", enc.speaker_id, "speaker id (u16)");
  c_encode->callback([&enc]() { run_encode(enc); });

  // flatten-f0: encode with the F0 track flattened to the speaker mean
  EncodeArgs flat;
  flat.flatten = true;
  CLI::App* c_flatten = app.add_subcommand(
      "flatten-f0", "wav -> .dsrc with the F0 track flattened to the "
                    "speaker mean before quantization");
  c_flatten->add_option("input", flat.input, "input wav")->required();
  c_flatten->add_option("--config", flat.config, "run config file");
  c_flatten->add_option("--out", flat.output, "output .dsrc path");
  c_flatten->add_option("--features", flat.features_path,
                        "precomputed feature file (FTRS)");
  c_flatten->add_option("--content-codebook", flat.content_codebook,
                        "content codebook (CDBK)");
  c_flatten->add_option("--f0-codebook", flat.f0_codebook,
                        "F0 codebook (CDBK)");
  c_flatten->add_option("--speaker-id", flat.speaker_id, "speaker id (u16)");
  c_flatten->add_option("--mean", flat.flatten_mean,
                        "flatten to this value instead of the utterance "
                        "voiced mean (Hz)");
  c_flatten->callback([&flat]() { run_encode(flat); });

  // decode
  std::string dec_config, dec_in, dec_out, dec_gen, dec_spk;
  CLI::App* c_decode =
      app.add_subcommand("decode", ".dsrc stream -> wav via the vocoder");
  c_decode->add_option("input", dec_in, "input .dsrc")->required();
  c_decode->add_option("--config", dec_config, "run config file");
  c_decode->add_option("--out", dec_out, "output wav path");
  c_decode->add_option("--generator", dec_gen,
                       "generator weights (WGTS) or random:SEED");
  c_decode->add_option("--speakers", dec_spk,
                       "speaker table (WGTS) or random:SEED:N");
  c_decode->callback([&]() {
    run_decode(dec_config, dec_in, dec_out, dec_gen, dec_spk);
  });

  // convert
  std::string cv_config, cv_in, cv_prefix, cv_gen, cv_spk;
  int cv_speaker = -1, cv_targets = 5;
  std::uint64_t cv_seed = 0;
  CLI::App* c_convert = app.add_subcommand(
      "convert", "re-target a stream's speaker id and resynthesize");
  c_convert->add_option("input", cv_in, "input .dsrc")->required();
  c_convert->add_option("--config", cv_config, "run config file");
  c_convert->add_option("--out-prefix", cv_prefix,
                        "output prefix (default: input stem)");
  c_convert->add_option("--speaker-id", cv_speaker,
                        "explicit target speaker id");
  c_convert->add_option("--num-targets", cv_targets,
                        "number of random target speakers");
  CLI::Option* cv_seed_opt =
      c_convert->add_option("--seed", cv_seed, "target selection seed");
  c_convert->add_option("--generator", cv_gen,
                        "generator weights (WGTS) or random:SEED");
  c_convert->add_option("--speakers", cv_spk,
                        "speaker table (WGTS) or random:SEED:N");
  c_convert->callback([&]() {
    run_convert(cv_config, cv_in, cv_prefix, cv_speaker, cv_targets, cv_seed,
                cv_seed_opt->count() > 0, cv_gen, cv_spk);
  });

  // analyze
  std::string an_config, an_stream, an_ref, an_hyp, an_disc;
  CLI::App* c_analyze = app.add_subcommand(
      "analyze", "bitrate breakdown, stream stats, VDE/FFE and losses");
  c_analyze->add_option("--config", an_config, "run config file");
  c_analyze->add_option("--stream", an_stream, ".dsrc stream to inspect");
  c_analyze->add_option("--ref", an_ref, "reference wav");
  c_analyze->add_option("--hyp", an_hyp, "hypothesis wav (e.g. resynthesis)");
  c_analyze->add_option("--discriminator", an_disc,
                        "discriminator weights (WGTS) or random:SEED, "
                        "enables the loss report");
  c_analyze->callback([&]() {
    run_analyze(an_config, an_stream, an_ref, an_hyp, an_disc);
  });

  // train-kmeans
  std::string tk_config, tk_out = "content.cdbk";
  std::vector<std::string> tk_wavs, tk_features;
  int tk_k = 0, tk_iters = 100;
  double tk_tol = 1e-6;
  std::uint64_t tk_seed = 0;
  CLI::App* c_tk = app.add_subcommand(
      "train-kmeans", "fit the content codebook with k-means");
  c_tk->add_option("--config", tk_config, "run config file");
  c_tk->add_option("--wav", tk_wavs, "input wav(s) for baseline features");
  c_tk->add_option("--features", tk_features, "input feature file(s)");
  c_tk->add_option("--out", tk_out, "output codebook path");
  c_tk->add_option("--k", tk_k, "number of units (default: config K)");
  c_tk->add_option("--max-iters", tk_iters, "Lloyd iteration cap");
  c_tk->add_option("--tol", tk_tol, "relative inertia tolerance");
  CLI::Option* tk_seed_opt = c_tk->add_option("--seed", tk_seed, "RNG seed");
  c_tk->callback([&]() {
    run_train_kmeans(tk_config, tk_wavs, tk_features, tk_out, tk_k, tk_iters,
                     tk_tol, tk_seed, tk_seed_opt->count() > 0);
  });

  // train-f0vq
  std::string tf_config, tf_out = "f0.cdbk";
  std::vector<std::string> tf_wavs, tf_tracks;
  int tf_k = 0, tf_updates = 300;
  std::uint64_t tf_seed = 0;
  CLI::App* c_tf = app.add_subcommand(
      "train-f0vq", "train the F0 codebook with EMA updates");
  c_tf->add_option("--config", tf_config, "run config file");
  c_tf->add_option("--wav", tf_wavs, "input wav(s)");
  c_tf->add_option("--f0", tf_tracks, "input F0 track file(s) (F0TK)");
  c_tf->add_option("--out", tf_out, "output codebook path");
  c_tf->add_option("--k", tf_k, "codebook size (default: config K')");
  c_tf->add_option("--updates", tf_updates, "EMA update passes");
  CLI::Option* tf_seed_opt = c_tf->add_option("--seed", tf_seed, "RNG seed");
  c_tf->callback([&]() {
    run_train_f0vq(tf_config, tf_wavs, tf_tracks, tf_out, tf_k, tf_updates,
                   tf_seed, tf_seed_opt->count() > 0);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << "\n";
    return kUsage;
  } catch (const dsrc::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMissingFile;
  } catch (const dsrc::MismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMismatch;
  } catch (const dsrc::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadData;
  } catch (const dsrc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
