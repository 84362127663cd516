import java.util.Base64;

public class SerialKit {

    public static String toCsv(String[] fields) {
        StringBuilder sb = new StringBuilder();
        for (int i = 0; i < fields.length; i++) {
            if (i > 0) {
                sb.append(",");
            }
            if (fields[i].indexOf(",") >= 0) {
                sb.append("\"");
                sb.append(fields[i].replace("\"", "\"\""));
                sb.append("\"");
            } else {
                sb.append(fields[i]);
            }
        }
        return sb.toString();
    }

    public static String[] fromCsv(String line) {
        return line.split(",", -1);
    }

    public static String encodeB64(byte[] data) {
        return Base64.getEncoder().encodeToString(data);
    }

    public static Object fromJson(String text) {
        return new JSONObject(text);
    }
}
