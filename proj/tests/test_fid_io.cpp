#include "chordv/errors.hpp"
#include "chordv/fid_io.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <clocale>
#include <filesystem>
#include <locale>
#include <sstream>

using namespace chordv;

TEST(FidIo, RoundTripIsExact)
{
    std::mt19937_64 rng(41);
    ComplexVector v = oracle::random_vector(rng, 33);
    v[3] = Complex(1e-300, -0.0);
    v[4] = Complex(1.0 / 3.0, 123456789.123456789);
    const Fid x(v, 1.0 / 3000.0);
    std::stringstream ss;
    write_fid(x, ss);
    const Fid y = read_fid(ss);
    EXPECT_EQ(y.samples(), x.samples());
    EXPECT_EQ(y.dt(), x.dt());
}

TEST(FidIo, ParsesDocumentedLayout)
{
    std::istringstream in("\xEF\xBB\xBF# acquired somewhere\n# dt=0.002\nindex,real,imag\r\n0,1.5,-2\r\n1,0,0.25\n\n");
    const Fid x = read_fid(in);
    ASSERT_EQ(x.size(), 2);
    EXPECT_EQ(x.dt(), 0.002);
    EXPECT_EQ(x[0], Complex(1.5, -2.0));
    EXPECT_EQ(x[1], Complex(0.0, 0.25));
}

TEST(FidIo, WrittenHeader)
{
    std::ostringstream out;
    write_fid(Fid(ComplexVector::Ones(2), 0.001), out);
    EXPECT_EQ(out.str(), "# dt=0.001\nindex,real,imag\n0,1,0\n1,1,0\n");
}

TEST(FidIo, IgnoresGlobalLocale)
{
    const std::locale old = std::locale::global(std::locale::classic());
    const char* de = std::setlocale(LC_ALL, "de_DE.UTF-8");
    std::ostringstream out;
    write_fid(Fid(ComplexVector::Constant(2, Complex(0.5, -1.25)), 0.001), out);
    EXPECT_NE(out.str().find("0,0.5,-1.25"), std::string::npos);
    std::istringstream in(out.str());
    EXPECT_EQ(read_fid(in)[1], Complex(0.5, -1.25));
    if (de) std::setlocale(LC_ALL, "C");
    std::locale::global(old);
}

TEST(FidIo, RejectsMalformedInput)
{
    auto bad = [](const std::string& text) {
        std::istringstream in(text);
        EXPECT_THROW(read_fid(in), ValidationError) << text;
    };
    bad("index,real,imag\n0,1,0\n1,1,0\n");                  // no dt
    bad("# dt=0.001\nidx,re,im\n0,1,0\n1,1,0\n");            // header
    bad("# dt=0.001\nindex,real,imag\n0,1,0\n2,1,0\n");      // index gap
    bad("# dt=0.001\nindex,real,imag\n0,1,0\n1,1\n");        // short row
    bad("# dt=0.001\nindex,real,imag\n0,1,0\n1,1,0,7\n");    // long row
    bad("# dt=0.001\nindex,real,imag\n0,1,0\n1,1;5,0\n");    // bad number
    bad("# dt=0.001\nindex,real,imag\n0,1,0\n1,1,0,5\n");
    bad("# dt=0.001\nindex,real,imag\n0,1,0\n");             // N < 2
    bad("# dt=-1\nindex,real,imag\n0,1,0\n1,1,0\n");         // dt <= 0
    bad("# dt=0.001\nindex,real,imag\n0,nan,0\n1,1,0\n");    // non-finite
    bad("# dt=0,001\nindex,real,imag\n0,1,0\n1,1,0\n");      // decimal comma
    bad("index,real,imag\n# dt=0.001\n0,1,0\n1,1,0\n");      // dt after header
}

TEST(FidIo, MissingFileIsIoError)
{
    EXPECT_THROW(read_fid(std::string("/nonexistent/dir/x.csv")), IoError);
    EXPECT_THROW(write_fid(Fid(ComplexVector::Ones(2), 1.0), std::string("/nonexistent/dir/x.csv")), IoError);
}

TEST(FidIo, FileRoundTrip)
{
    const auto path = std::filesystem::temp_directory_path() / "chordv_fid_io_test.csv";
    const Fid x(ComplexVector::LinSpaced(16, 0.0, 1.5), 1e-4);
    write_fid(x, path.string());
    EXPECT_EQ(read_fid(path.string()).samples(), x.samples());
    std::filesystem::remove(path);
}

TEST(FormatDouble, ShortestRoundTrip)
{
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(-2.0), "-2");
    EXPECT_EQ(format_double(1e-20), "1e-20");
    const double third = 1.0 / 3.0;
    EXPECT_EQ(std::stod(format_double(third)), third);
}
