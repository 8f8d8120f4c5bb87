/*
Copyright 2026 the svcrypt authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "svcrypt/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "svcrypt/attack.hpp"
#include "svcrypt/codec.hpp"
#include "svcrypt/container.hpp"
#include "svcrypt/keys.hpp"
#include "svcrypt/metrics.hpp"
#include "svcrypt/schemes.hpp"

namespace svcrypt::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

MasterKey key_from_option(const std::string& hex) {
    if (hex.empty())
        throw UsageError("master key required (--key or SVCRYPT_KEY)");
    return MasterKey::from_hex(hex);
}

void require_distinct(const std::string& input, const std::string& output) {
    std::error_code ec;
    if (input == output ||
        (std::filesystem::exists(output) && std::filesystem::equivalent(input, output, ec)))
        throw UsageError("input and output paths must differ");
}

std::pair<std::uint16_t, std::uint16_t> parse_dims(const std::string& dims) {
    const auto x = dims.find('x');
    if (x == std::string::npos)
        throw UsageError("--dims must look like 64x64");
    const int w = std::stoi(dims.substr(0, x));
    const int h = std::stoi(dims.substr(x + 1));
    if (w <= 0 || h <= 0 || w > 0xffff || h > 0xffff)
        throw UsageError("--dims out of range");
    return {static_cast<std::uint16_t>(w), static_cast<std::uint16_t>(h)};
}

std::pair<std::uint16_t, std::uint16_t> parse_fps(const std::string& fps) {
    const auto slash = fps.find('/');
    int num = 0, den = 1;
    if (slash == std::string::npos) {
        num = std::stoi(fps);
    } else {
        num = std::stoi(fps.substr(0, slash));
        den = std::stoi(fps.substr(slash + 1));
    }
    if (num <= 0 || den <= 0 || num > 0xffff || den > 0xffff)
        throw UsageError("--fps out of range");
    return {static_cast<std::uint16_t>(num), static_cast<std::uint16_t>(den)};
}

CwMask parse_classes(const std::string& spec) {
    CwMask mask = 0;
    std::stringstream ss(spec);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token == "dc")
            mask |= mask_of(CwClass::IntraDcSuffix);
        else if (token == "dc-sign")
            mask |= mask_of(CwClass::SignIntraDc);
        else if (token == "ac")
            mask |= mask_of(CwClass::AcLevelSuffix);
        else if (token == "ac-sign")
            mask |= mask_of(CwClass::SignAc);
        else if (token == "mvd")
            mask |= mask_of(CwClass::MvdSuffix);
        else if (token == "mvd-sign")
            mask |= mask_of(CwClass::SignMvd);
        else if (token == "all")
            mask |= kAllCodewordClasses;
        else
            throw UsageError("unknown codeword class: " + token);
    }
    if (mask == 0)
        throw UsageError("empty class list");
    return mask;
}

std::vector<std::string> pgm_files_in(const std::string& dir) {
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".pgm")
            files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    return files;
}

SvcFile load_svc(const std::string& path) {
    return parse_svc(read_file(path));
}

// ---- subcommand configs ---------------------------------------------------

struct EncodeOpts {
    std::string input, audio, output;
    std::string dims, fps = "25";
    std::string codec = "dct";
    int qp = 4;
    int gop = 8;
};

struct CryptOpts {
    std::string input, output, key;
    std::string scheme = "proposed";
    std::string classes;
    double fraction = 0.5;
    double blocks = 1.0;
    std::string report_format = "text";
};

struct AttackOpts {
    std::string plain, encrypted, output;
    int known = 1;
    int qp = 0; // 0: read from the stream
    int gop = 8;
};

struct BenchOpts {
    std::string input, key;
    std::string scheme = "proposed";
    double fraction = 0.5;
    double blocks = 1.0;
    int runs = 5;
    std::string format = "text";
};

struct CompareOpts {
    std::string corpus, output;
    std::string schemes = "all";
    int qp = 4;
    int gop = 8;
    std::string format = "csv";
};

int cmd_encode(const EncodeOpts& o) {
    require_distinct(o.input, o.output);
    RawVideo video;
    const auto [num, den] = parse_fps(o.fps);
    if (fs::is_directory(o.input)) {
        video = ingest_pgm_sequence(pgm_files_in(o.input), num, den);
        if (!o.dims.empty()) {
            const auto [w, h] = parse_dims(o.dims);
            if (w != video.width || h != video.height)
                throw FormatError("pgm headers disagree with --dims");
        }
    } else if (!o.dims.empty()) {
        const auto [w, h] = parse_dims(o.dims);
        video = ingest_luma_stream(read_file(o.input), w, h, num, den);
    } else {
        throw UsageError("input must be a PGM directory, or a raw file with --dims");
    }

    AudioTrack audio;
    if (!o.audio.empty())
        audio = parse_wav(read_file(o.audio));

    const CodecId codec = o.codec == "raw"    ? CodecId::Raw
                          : o.codec == "dct" ? CodecId::Dct
                                             : throw UsageError("codec must be raw or dct");
    const SvcFile file = encode_video(video, audio, codec, o.qp, o.gop);
    write_file_atomic(o.output, serialize_svc(file));
    std::cerr << "wrote " << o.output << " (" << file.frame_count() << " frames)\n";
    return 0;
}

int cmd_decode(const std::string& input, const std::string& outdir) {
    require_distinct(input, outdir);
    const SvcFile file = load_svc(input);
    if (file.header.encrypted())
        std::cerr << "note: decoding an encrypted file; output shows the cipher imagery\n";
    auto [video, audio] = decode_video(file);

    fs::create_directories(outdir);
    char name[32];
    for (std::size_t i = 0; i < video.frames.size(); ++i) {
        std::snprintf(name, sizeof(name), "frame_%04zu.pgm", i);
        PgmImage img{video.width, video.height, video.frames[i]};
        write_file_atomic((fs::path(outdir) / name).string(), write_pgm(img));
    }
    if (!audio.empty())
        write_file_atomic((fs::path(outdir) / "audio.wav").string(), write_wav(audio));
    std::cerr << "wrote " << video.frames.size() << " frames to " << outdir << "\n";
    return 0;
}

SchemeParams params_from(const CryptOpts& o) {
    SchemeParams params;
    params.scheme = scheme_from_name(o.scheme);
    if (!o.classes.empty())
        params.classes = parse_classes(o.classes);
    params.frame_fraction = o.fraction;
    params.block_fraction = o.blocks;
    return params;
}

int cmd_encrypt(const CryptOpts& o) {
    require_distinct(o.input, o.output);
    const SvcFile input = load_svc(o.input);
    const MasterKey master = key_from_option(o.key);
    const SchemeParams params = params_from(o);

    auto [out, report] = encrypt(input, master, params);
    write_file_atomic(o.output, serialize_svc(out));

    const EncryptionRatios er = encryption_ratio(report);
    if (o.report_format == "json") {
        json j{{"scheme", o.scheme},
               {"bytes_touched", report.bytes_touched},
               {"total_payload_bytes", report.total_payload_bytes},
               {"aes_bits", report.aes_bits},
               {"er_touched", er.er_touched},
               {"er_size", er.er_size},
               {"stage_ms",
                {{"Video Shredding", report.timings.shredding_ms},
                 {"Shuffling", report.timings.shuffling_ms},
                 {"Video Stitching", report.timings.stitching_ms},
                 {"AES Encryption", report.timings.aes_ms}}}};
        std::cout << j.dump(2) << "\n";
    } else {
        char line[160];
        std::snprintf(line, sizeof(line), "%-16s %10.3f ms\n", "Video Shredding",
                      report.timings.shredding_ms);
        std::cout << line;
        std::snprintf(line, sizeof(line), "%-16s %10.3f ms\n", "Shuffling",
                      report.timings.shuffling_ms);
        std::cout << line;
        std::snprintf(line, sizeof(line), "%-16s %10.3f ms\n", "Video Stitching",
                      report.timings.stitching_ms);
        std::cout << line;
        std::snprintf(line, sizeof(line), "%-16s %10.3f ms\n", "AES Encryption",
                      report.timings.aes_ms);
        std::cout << line;
        std::snprintf(line, sizeof(line), "er_touched %.4f  er_size %.4f\n", er.er_touched,
                      er.er_size);
        std::cout << line;
    }
    return 0;
}

int cmd_decrypt(const CryptOpts& o) {
    require_distinct(o.input, o.output);
    const SvcFile input = load_svc(o.input);
    const MasterKey master = key_from_option(o.key);
    SchemeParams params;
    if (!o.classes.empty())
        params.classes = parse_classes(o.classes);
    params.frame_fraction = o.fraction;
    params.block_fraction = o.blocks;

    const SvcFile out = decrypt(input, master, params);
    write_file_atomic(o.output, serialize_svc(out));
    std::cerr << "wrote " << o.output << "\n";
    return 0;
}

int cmd_attack(const AttackOpts& o) {
    const SvcFile encrypted = load_svc(o.encrypted);
    const SchemeId scheme = static_cast<SchemeId>(encrypted.header.scheme_id);

    json j;
    j["scheme"] = std::string(scheme_name(scheme));
    j["known_frames"] = o.known;

    if (scheme == SchemeId::Crisscross) {
        const SvcFile plain_svc = load_svc(o.plain);
        if (plain_svc.header.encrypted())
            throw UsageError("--plain must be an unencrypted container");
        auto [video, audio] = decode_video(plain_svc);
        int qp = o.qp;
        if (qp == 0) {
            if (encrypted.records.empty() || encrypted.records[0].video.size() < 2)
                throw FormatError("cannot read qp from stream");
            qp = encrypted.records[0].video[1];
        }
        const CoeffKpaReport r = run_coefficient_kpa(video, encrypted, o.known, qp, o.gop);
        j["recovery_rate"] = r.determined_fraction;
        j["unique"] = r.unique;
        if (r.unique) {
            // +inf means the repaired stream decoded bit-exactly
            if (std::isfinite(r.holdout_psnr_db))
                j["holdout_psnr_db"] = r.holdout_psnr_db;
            else
                j["holdout_psnr_db"] = "inf";
        }
    } else {
        const SvcFile plain_svc = load_svc(o.plain);
        const ByteKpaReport r = run_byte_kpa(plain_svc, encrypted, o.known);
        j["precondition_ok"] = r.precondition_ok;
        j["recovery_rate"] = r.precondition_ok ? r.recovery_rate : 0.0;
        j["provable_rate"] = r.provable_rate;
        j["unique"] = r.precondition_ok && r.provable_rate == 1.0;
    }

    const std::string text = j.dump(2) + "\n";
    if (o.output.empty())
        std::cout << text;
    else
        write_file_atomic(o.output, ByteView(reinterpret_cast<const std::uint8_t*>(text.data()),
                                             text.size()));
    return 0;
}

int cmd_bench(const BenchOpts& o) {
    const SvcFile input = load_svc(o.input);
    const MasterKey master = key_from_option(o.key);
    SchemeParams params;
    params.scheme = scheme_from_name(o.scheme);
    params.frame_fraction = o.fraction;
    params.block_fraction = o.blocks;

    const BenchResult result = bench(input, master, params, o.runs);
    if (o.format == "json") {
        json j{{"scheme", o.scheme},
               {"runs", result.runs},
               {"stage_ms",
                {{"Video Shredding", result.median.shredding_ms},
                 {"Shuffling", result.median.shuffling_ms},
                 {"Video Stitching", result.median.stitching_ms},
                 {"AES Encryption", result.median.aes_ms}}},
               {"aes_bits", result.report.aes_bits}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << format_bench_text(result);
    }
    return 0;
}

int cmd_compare(const CompareOpts& o) {
    std::vector<SchemeId> schemes;
    if (o.schemes == "all") {
        schemes = {SchemeId::Full, SchemeId::Pure, SchemeId::Crisscross, SchemeId::Choose,
                   SchemeId::Proposed};
    } else {
        std::stringstream ss(o.schemes);
        std::string token;
        while (std::getline(ss, token, ','))
            schemes.push_back(scheme_from_name(token));
    }

    CompareOptions opts;
    opts.qp = o.qp;
    opts.gop = o.gop;
    const std::vector<CompareRow> rows = compare(schemes, load_corpus(o.corpus), opts);
    const std::string text = o.format == "text" ? compare_to_text(rows) : compare_to_csv(rows);
    if (o.output.empty())
        std::cout << text;
    else
        write_file_atomic(o.output, ByteView(reinterpret_cast<const std::uint8_t*>(text.data()),
                                             text.size()));
    return 0;
}

int cmd_inspect(const std::string& input) {
    const SvcFile file = load_svc(input);
    const SvcHeader& h = file.header;
    std::cout << "codec        " << (h.codec_id == CodecId::Raw ? "RAW" : "DCT") << "\n";
    std::cout << "scheme       " << scheme_name(static_cast<SchemeId>(h.scheme_id)) << "\n";
    std::cout << "encrypted    " << (h.encrypted() ? "yes" : "no") << "\n";
    std::cout << "dimensions   " << h.width << "x" << h.height << "\n";
    std::cout << "fps          " << h.fps_num << "/" << h.fps_den << "\n";
    std::cout << "frames       " << file.frame_count() << "\n";
    std::cout << "audio        "
              << (h.channels ? std::to_string(h.sample_rate) + " Hz mono" : "none") << "\n";
    std::cout << "key blob     " << h.key_blob.size() << " bytes\n";

    std::uint64_t video_bytes = 0, audio_bytes = 0;
    for (const FrameRecord& r : file.records) {
        video_bytes += r.video.size();
        audio_bytes += r.audio.size();
    }
    std::cout << "payloads     " << video_bytes << " video B, " << audio_bytes
              << " audio B\n";

    const std::size_t shown = std::min<std::size_t>(file.records.size(), 8);
    for (std::size_t i = 0; i < shown; ++i) {
        const FrameRecord& r = file.records[i];
        std::cout << "  record " << i << ": video " << r.video.size() << " B, audio "
                  << r.audio.size() << " B";
        if (h.codec_id == CodecId::Dct && r.video.size() >= 2 && r.video[0] <= 1)
            std::cout << " (" << (r.video[0] == 0 ? "I" : "P") << ", qp "
                      << static_cast<int>(r.video[1]) << ")";
        std::cout << "\n";
    }
    if (file.records.size() > shown)
        std::cout << "  ... " << file.records.size() - shown << " more\n";

    if (h.codec_id == CodecId::Dct) {
        static const char* kClassNames[6] = {"intra-dc", "ac-level", "mvd",
                                             "sign-dc", "sign-ac", "sign-mvd"};
        std::uint64_t bits[6] = {};
        std::uint32_t parsed = 0, i_frames = 0;
        for (const FrameRecord& r : file.records) {
            try {
                const FrameStructure st = parse_frame_structure(r.video, h.width, h.height);
                for (const CodewordSpan& s : st.codewords.spans)
                    bits[static_cast<int>(s.cls)] += s.bit_width;
                i_frames += st.type == FrameType::I ? 1 : 0;
                ++parsed;
            } catch (const FormatError&) {
            }
        }
        std::cout << "parseable    " << parsed << "/" << file.frame_count() << " frames ("
                  << i_frames << " I)\n";
        std::cout << "codeword bits";
        for (int c = 0; c < 6; ++c)
            std::cout << " " << kClassNames[c] << "=" << bits[c];
        std::cout << "\n";
    }
    return 0;
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"svcrypt: selective video encryption toolkit"};
    app.require_subcommand(1);

    EncodeOpts enc_o;
    auto* enc = app.add_subcommand("encode", "pack PGM frames (and WAV audio) into an SVC file");
    enc->add_option("--input,-i", enc_o.input, "PGM directory or raw luma file")->required();
    enc->add_option("--audio,-a", enc_o.audio, "16-bit mono PCM WAV");
    enc->add_option("--output,-o", enc_o.output, "output .svc path")->required();
    enc->add_option("--dims", enc_o.dims, "WxH for raw luma input");
    enc->add_option("--fps", enc_o.fps, "frame rate, n or n/d (default 25)");
    enc->add_option("--codec", enc_o.codec, "raw or dct (default dct)");
    enc->add_option("--qp", enc_o.qp, "quantizer 1..31 (default 4)");
    enc->add_option("--gop", enc_o.gop, "I-frame interval (default 8)");

    std::string dec_in, dec_out;
    auto* dec = app.add_subcommand("decode", "unpack an SVC file to PGM frames and WAV");
    dec->add_option("--input,-i", dec_in)->required();
    dec->add_option("--output,-o", dec_out, "output directory")->required();

    CryptOpts encr_o;
    auto* encr = app.add_subcommand("encrypt", "encrypt an SVC file under one of the schemes");
    encr->add_option("--input,-i", encr_o.input)->required();
    encr->add_option("--output,-o", encr_o.output)->required();
    encr->add_option("--scheme,-s", encr_o.scheme,
                     "proposed|full|pure|crisscross|choose|perceptual");
    encr->add_option("--key,-k", encr_o.key, "master key, 32/48/64 hex digits")
        ->envname("SVCRYPT_KEY");
    encr->add_option("--classes", encr_o.classes,
                     "codeword classes: dc,dc-sign,ac,ac-sign,mvd,mvd-sign,all");
    encr->add_option("--fraction,-f", encr_o.fraction, "choose: frame fraction (default 0.5)");
    encr->add_option("--blocks,-p", encr_o.blocks,
                     "perceptual: leading macroblock fraction (default 1.0)");
    encr->add_option("--format", encr_o.report_format, "report format: text|json");

    CryptOpts decr_o;
    auto* decr = app.add_subcommand("decrypt", "invert an encryption with the master key");
    decr->add_option("--input,-i", decr_o.input)->required();
    decr->add_option("--output,-o", decr_o.output)->required();
    decr->add_option("--key,-k", decr_o.key, "master key, 32/48/64 hex digits")
        ->envname("SVCRYPT_KEY");
    decr->add_option("--classes", decr_o.classes, "classes used at encryption time");
    decr->add_option("--fraction,-f", decr_o.fraction, "fraction used at encryption time");
    decr->add_option("--blocks,-p", decr_o.blocks, "block fraction used at encryption time");

    AttackOpts atk_o;
    auto* atk = app.add_subcommand("attack", "run the known-plaintext attack for the file's scheme");
    atk->add_option("--plain", atk_o.plain, "known plaintext container")->required();
    atk->add_option("--encrypted", atk_o.encrypted, "encrypted container")->required();
    atk->add_option("--known", atk_o.known, "number of known leading frames (default 1)");
    atk->add_option("--qp", atk_o.qp, "codec qp (default: read from the stream)");
    atk->add_option("--gop", atk_o.gop, "codec gop (default 8)");
    atk->add_option("--output,-o", atk_o.output, "write the JSON report here");

    BenchOpts bench_o;
    auto* ben = app.add_subcommand("bench", "time the encryption stages");
    ben->add_option("--input,-i", bench_o.input)->required();
    ben->add_option("--key,-k", bench_o.key)->envname("SVCRYPT_KEY");
    ben->add_option("--scheme,-s", bench_o.scheme);
    ben->add_option("--fraction,-f", bench_o.fraction);
    ben->add_option("--blocks,-p", bench_o.blocks);
    ben->add_option("--runs", bench_o.runs, "timed runs (default 5)");
    ben->add_option("--format", bench_o.format, "text|json");

    CompareOpts cmp_o;
    auto* cmp = app.add_subcommand("compare", "measure all schemes over a corpus directory");
    cmp->add_option("--corpus", cmp_o.corpus, "directory of clips")->required();
    cmp->add_option("--schemes", cmp_o.schemes, "all or a comma list");
    cmp->add_option("--qp", cmp_o.qp);
    cmp->add_option("--gop", cmp_o.gop);
    cmp->add_option("--format", cmp_o.format, "csv|text");
    cmp->add_option("--output,-o", cmp_o.output, "write table here instead of stdout");

    std::string ins_in;
    auto* ins = app.add_subcommand("inspect", "dump header, index and codeword summary");
    ins->add_option("--input,-i", ins_in)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*enc) return cmd_encode(enc_o);
        if (*dec) return cmd_decode(dec_in, dec_out);
        if (*encr) return cmd_encrypt(encr_o);
        if (*decr) return cmd_decrypt(decr_o);
        if (*atk) return cmd_attack(atk_o);
        if (*ben) return cmd_bench(bench_o);
        if (*cmp) return cmd_compare(cmp_o);
        if (*ins) return cmd_inspect(ins_in);
        throw UsageError("no subcommand");
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const KeyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace svcrypt::cli
