/// A fixed-width record made of `WORDS` little-endian 64-bit words.
pub trait Record: Copy + Send + Sync + 'static {
    const WORDS: usize;

    fn encode(&self, out: &mut [u64]);

    fn decode(words: &[u64]) -> Self;

    fn byte_width() -> usize {
        Self::WORDS * 8
    }
}

impl Record for u64 {
    const WORDS: usize = 1;

    fn encode(&self, out: &mut [u64]) {
        out[0] = *self;
    }

    fn decode(words: &[u64]) -> Self {
        words[0]
    }
}

impl Record for (u64, u64) {
    const WORDS: usize = 2;

    fn encode(&self, out: &mut [u64]) {
        out[0] = self.0;
        out[1] = self.1;
    }

    fn decode(words: &[u64]) -> Self {
        (words[0], words[1])
    }
}

impl Record for (u64, u64, u64) {
    const WORDS: usize = 3;

    fn encode(&self, out: &mut [u64]) {
        out[0] = self.0;
        out[1] = self.1;
        out[2] = self.2;
    }

    fn decode(words: &[u64]) -> Self {
        (words[0], words[1], words[2])
    }
}

impl<R: Record> Record for std::cmp::Reverse<R> {
    const WORDS: usize = R::WORDS;

    fn encode(&self, out: &mut [u64]) {
        self.0.encode(out)
    }

    fn decode(words: &[u64]) -> Self {
        std::cmp::Reverse(R::decode(words))
    }
}

pub(crate) fn encode_block<R: Record>(records: &[R], bytes: &mut Vec<u8>) {
    bytes.clear();
    let mut words = vec![0u64; R::WORDS];
    for r in records {
        r.encode(&mut words);
        for w in &words {
            bytes.extend_from_slice(&w.to_le_bytes());
        }
    }
}

pub(crate) fn decode_block<R: Record>(bytes: &[u8], out: &mut Vec<R>) {
    out.clear();
    let mut words = vec![0u64; R::WORDS];
    for chunk in bytes.chunks_exact(R::WORDS * 8) {
        for (w, b) in words.iter_mut().zip(chunk.chunks_exact(8)) {
            *w = u64::from_le_bytes(b.try_into().expect("8-byte chunk"));
        }
        out.push(R::decode(&words));
    }
}
