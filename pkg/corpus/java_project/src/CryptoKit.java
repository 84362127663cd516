import java.nio.charset.StandardCharsets;
import java.security.MessageDigest;
import java.security.SecureRandom;
import java.util.HexFormat;

public class CryptoKit {

    private final String key;

    public CryptoKit(String key) {
        this.key = key;
    }

    public static String sha256Hex(String data) throws Exception {
        MessageDigest md = MessageDigest.getInstance("SHA-256");
        byte[] digest = md.digest(data.getBytes(StandardCharsets.UTF_8));
        return HexFormat.of().formatHex(digest);
    }

    public static byte[] xorCipher(byte[] data, byte[] key) {
        if (key.length == 0) {
            throw new IllegalArgumentException("empty key");
        }
        byte[] out = new byte[data.length];
        for (int i = 0; i < data.length; i++) {
            out[i] = (byte) (data[i] ^ key[i % key.length]);
        }
        return out;
    }

    public static long checksum(byte[] data) {
        long total = 0;
        for (int i = 0; i < data.length; i++) {
            total = total + (data[i] & 0xFF);
        }
        return total;
    }

    public static String saltedHash(String password) throws Exception {
        SecureRandom rng = new SecureRandom();
        byte[] salt = new byte[16];
        rng.nextBytes(salt);
        MessageDigest md = MessageDigest.getInstance("SHA-256");
        md.update(salt);
        byte[] digest = md.digest(password.getBytes(StandardCharsets.UTF_8));
        return HexFormat.of().formatHex(salt) + ":" + HexFormat.of().formatHex(digest);
    }

    public String keyFingerprint() {
        return this.key.substring(0, 4) + "****";
    }

    public static String doubleHash(String s) throws Exception {
        return sha256Hex(sha256Hex(s));
    }
}
