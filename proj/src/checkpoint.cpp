#include "cavfluor/checkpoint.hpp"

#include "cavfluor/error.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace cavfluor {

namespace fs = std::filesystem;

std::string scenario_hash(std::string_view text) {
	std::uint64_t h = 0xcbf29ce484222325ull;
	for(unsigned char c : text) {
		h ^= c;
		h *= 0x100000001b3ull;
	}
	char buf[17];
	std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
	return buf;
}

namespace {

class Writer {
public:
	void u64(std::uint64_t v) {
		for(int b = 0; b < 8; b++)
			bytes_.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
	}
	void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
	void opt(const std::optional<double> &v) {
		u64(v ? 1 : 0);
		f64(v ? *v : 0.0);
	}
	const std::string &bytes() const { return bytes_; }

private:
	std::string bytes_;
};

class Reader {
public:
	Reader(std::string bytes, fs::path path) : bytes_(std::move(bytes)), path_(std::move(path)) {}
	std::uint64_t u64() {
		if(pos_ + 8 > bytes_.size())
			throw IoError("truncated checkpoint payload: " + path_.string());
		std::uint64_t v = 0;
		for(int b = 0; b < 8; b++)
			v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + b])) << (8 * b);
		pos_ += 8;
		return v;
	}
	double f64() { return std::bit_cast<double>(u64()); }
	std::optional<double> opt() {
		const bool has = u64() != 0;
		const double v = f64();
		return has ? std::optional<double>(v) : std::nullopt;
	}
	std::size_t count(std::size_t limit) {
		const std::uint64_t n = u64();
		if(n > limit)
			throw IoError("implausible length in checkpoint payload: " + path_.string());
		return static_cast<std::size_t>(n);
	}
	bool done() const { return pos_ == bytes_.size(); }

private:
	std::string bytes_;
	fs::path path_;
	std::size_t pos_ = 0;
};

void write_atomic(const fs::path &path, const std::string &data, bool binary) {
	const fs::path tmp = path.string() + ".tmp";
	{
		std::ofstream out(tmp, binary ? std::ios::binary : std::ios::out);
		if(!out)
			throw IoError("cannot write " + tmp.string());
		out.write(data.data(), static_cast<std::streamsize>(data.size()));
		if(!out)
			throw IoError("write failed: " + tmp.string());
	}
	std::error_code ec;
	fs::rename(tmp, path, ec);
	if(ec)
		throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

std::string hexfloat(double v) {
	char buf[64];
	std::snprintf(buf, sizeof buf, "%a", v);
	return buf;
}

fs::path payload_path(const fs::path &manifest) {
	fs::path p = manifest;
	p.replace_extension(".bin");
	return p;
}

} // namespace

void save_checkpoint(const fs::path &manifest, const CheckpointTag &tag, const PropagationState &state) {
	Writer w;
	w.u64(state.psi.size());
	for(const cplx &a : state.psi) {
		w.f64(a.real());
		w.f64(a.imag());
	}
	w.u64(state.bath ? 1 : 0);
	if(state.bath) {
		w.u64(state.bath->x.size());
		for(std::size_t k = 0; k < state.bath->x.size(); k++) {
			w.f64(state.bath->x[k]);
			w.f64(state.bath->p[k]);
		}
		w.f64(state.bath->t);
	}
	w.u64(state.snapshots.size());
	for(const auto &s : state.snapshots) {
		for(double v : {s.t, s.p_fluor, s.n_cav, s.n_flu, s.n_excited, s.norm, s.energy})
			w.f64(v);
		w.opt(s.parity);
		w.opt(s.p_diss);
		w.u64(s.nuclear_density.size());
		for(double v : s.nuclear_density)
			w.f64(v);
	}
	w.u64(state.bath_trace.size());
	for(const auto &b : state.bath_trace) {
		w.f64(b.t);
		w.f64(b.feedback);
		w.f64(b.energy);
	}

	const fs::path bin = payload_path(manifest);
	write_atomic(bin, w.bytes(), true);

	std::ostringstream m;
	m << "cavfluor-checkpoint " << kCheckpointVersion << "\n"
	  << "scenario_hash " << tag.scenario_hash << "\n"
	  << "omega_prime " << hexfloat(tag.omega_f) << "\n"
	  << "step " << state.step << "\n"
	  << "dim " << state.psi.size() << "\n"
	  << "payload " << bin.filename().string() << "\n"
	  << "payload_bytes " << w.bytes().size() << "\n";
	write_atomic(manifest, m.str(), false);
}

PropagationState load_checkpoint(const fs::path &manifest, const CheckpointTag &expected) {
	std::ifstream in(manifest);
	if(!in)
		throw IoError("cannot read checkpoint manifest " + manifest.string());
	std::string magic;
	int version = 0;
	in >> magic >> version;
	if(magic != "cavfluor-checkpoint")
		throw IoError("not a checkpoint manifest: " + manifest.string());
	if(version != kCheckpointVersion)
		throw IoError("unsupported checkpoint version " + std::to_string(version) + " in " + manifest.string());
	std::map<std::string, std::string> kv;
	std::string key, value;
	while(in >> key >> value)
		kv[key] = value;
	for(const char *k : {"scenario_hash", "omega_prime", "step", "dim", "payload", "payload_bytes"})
		if(!kv.count(k))
			throw IoError(std::string("checkpoint manifest lacks '") + k + "': " + manifest.string());

	if(kv["scenario_hash"] != expected.scenario_hash)
		throw ConfigError("checkpoint " + manifest.string() + " was written for a different scenario");
	if(std::strtod(kv["omega_prime"].c_str(), nullptr) != expected.omega_f)
		throw ConfigError("checkpoint " + manifest.string() + " was written for a different omega'");

	const fs::path bin = manifest.parent_path() / kv["payload"];
	std::ifstream pin(bin, std::ios::binary);
	if(!pin)
		throw IoError("cannot read checkpoint payload " + bin.string());
	std::string bytes((std::istreambuf_iterator<char>(pin)), std::istreambuf_iterator<char>());
	if(std::to_string(bytes.size()) != kv["payload_bytes"])
		throw IoError("checkpoint payload size mismatch: " + bin.string());

	Reader r(std::move(bytes), bin);
	constexpr std::size_t big = std::size_t(1) << 40;
	PropagationState st;
	st.step = std::stoi(kv["step"]);
	const std::size_t dim = r.count(big);
	if(std::to_string(dim) != kv["dim"])
		throw IoError("checkpoint dimension mismatch: " + bin.string());
	st.psi.resize(dim);
	for(auto &a : st.psi) {
		const double re = r.f64();
		a = cplx(re, r.f64());
	}
	if(r.u64() != 0) {
		BathState b;
		const std::size_t n = r.count(big);
		b.x.resize(n);
		b.p.resize(n);
		for(std::size_t k = 0; k < n; k++) {
			b.x[k] = r.f64();
			b.p[k] = r.f64();
		}
		b.t = r.f64();
		st.bath = std::move(b);
	}
	st.snapshots.resize(r.count(big));
	for(auto &s : st.snapshots) {
		for(double *v : {&s.t, &s.p_fluor, &s.n_cav, &s.n_flu, &s.n_excited, &s.norm, &s.energy})
			*v = r.f64();
		s.parity = r.opt();
		s.p_diss = r.opt();
		s.nuclear_density.resize(r.count(big));
		for(double &v : s.nuclear_density)
			v = r.f64();
	}
	st.bath_trace.resize(r.count(big));
	for(auto &b : st.bath_trace) {
		b.t = r.f64();
		b.feedback = r.f64();
		b.energy = r.f64();
	}
	if(!r.done())
		throw IoError("trailing bytes in checkpoint payload: " + bin.string());
	return st;
}

} // namespace cavfluor
